use std::time::Instant;

fn main() {
    let lo: usize = std::env::args().nth(1).map_or(6, |s| s.parse().unwrap());
    let hi: usize = std::env::args().nth(2).map_or(16, |s| s.parse().unwrap());
    let t = Instant::now();
    let p = scc_families::family_presentation(lo, hi).unwrap();
    println!("built relators in {:?} ({} letters)", t.elapsed(), p.total_length());
    let t = Instant::now();
    let idx = scc_pieces::PieceIndex::build(&p).unwrap();
    println!("index in {:?}", t.elapsed());
    for (i, n) in (lo..=hi).enumerate() {
        let (len, q) = idx.longest_piece(i + 1);
        println!("n={n} |r|={} p={len} at {q} bound={}", idx.relator_len(i + 1), 18 * n + 1);
    }
    println!("total {:?}", t.elapsed());
    let status = std::fs::read_to_string("/proc/self/status").unwrap();
    for l in status.lines().filter(|l| l.starts_with("VmHWM")) {
        println!("{l}");
    }
}
