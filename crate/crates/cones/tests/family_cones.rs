use scc_cones::{
    build_cone, cone_diameter, export_graph, hyperbolicity, import_edge_list, ExportFormat, GenSetSpec, Method,
};
use scc_core::Presentation;
use scc_pieces::PieceIndex;
use std::path::PathBuf;

fn family_index() -> PieceIndex {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/family6_10.pres");
    PieceIndex::build(&Presentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap()
}

#[test]
fn laced_cones_are_thin_and_cycles_are_not() {
    let idx = family_index();
    let mut cycle = Vec::new();
    for i in 1..=idx.relator_count() {
        let laced = hyperbolicity(&build_cone(&idx, &GenSetSpec::laced(&[]), i).unwrap()).unwrap();
        assert!(laced.exact);
        assert_eq!(laced.slim_lower, 1);
        assert_eq!(laced.delta4_twice, 2);
        let c = hyperbolicity(&build_cone(&idx, &GenSetSpec::s_only(), i).unwrap()).unwrap();
        assert_eq!(c.method, Method::CycleClosedForm);
        cycle.push(c.delta4_twice);
    }
    assert!(cycle.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn p4_diameters_grow_along_the_family() {
    let idx = family_index();
    let d: Vec<u32> = (1..=3).map(|i| cone_diameter(&build_cone(&idx, &GenSetSpec::p4(), i).unwrap())).collect();
    assert!(d.windows(2).all(|w| w[0] < w[1]), "{d:?}");
}

#[test]
fn export_round_trip_on_a_laced_cone() {
    let idx = family_index();
    let g = build_cone(&idx, &GenSetSpec::laced(&[100]), 1).unwrap();
    let text = export_graph(&g, ExportFormat::EdgeList);
    let back = import_edge_list(std::str::from_utf8(&text).unwrap()).unwrap();
    assert_eq!(back.n(), g.n());
    assert_eq!(back.chords(), g.chords());
    assert_eq!(cone_diameter(&back), cone_diameter(&g));
}
