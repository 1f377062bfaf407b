use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scc_core::{Letter, Word};
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

const MAX_DEGREE: usize = 8;

/// A homomorphism to a symmetric group, stored as images of the generators
/// and of their inverses.
#[derive(Clone, Debug)]
struct PermHom {
    degree: usize,
    images: Vec<[u8; MAX_DEGREE]>,
}

impl PermHom {
    fn image(&self, l: Letter) -> &[u8; MAX_DEGREE] {
        &self.images[l.code() as usize]
    }

    fn eval(&self, w: &[Letter]) -> [u8; MAX_DEGREE] {
        let mut p = [0u8; MAX_DEGREE];
        for (x, slot) in p.iter_mut().enumerate().take(self.degree) {
            *slot = x as u8;
        }
        for &l in w {
            let g = self.image(l);
            for slot in p.iter_mut().take(self.degree) {
                *slot = g[*slot as usize];
            }
        }
        p
    }
}

/// Cheap element invariants: the image in the torsion-free part of the
/// abelianization (integer functionals killing every relator) and images
/// under a few homomorphisms to small symmetric groups found by seeded
/// random search.
#[derive(Clone, Debug)]
pub struct Invariants {
    functionals: Vec<Vec<i64>>,
    homs: Vec<PermHom>,
}

impl Invariants {
    pub fn new(rank: usize, relators: &[Word]) -> Self {
        Invariants { functionals: functionals(rank, relators), homs: find_homs(rank, relators) }
    }

    pub fn abelian_rank(&self) -> usize {
        self.functionals.len()
    }

    pub fn hom_count(&self) -> usize {
        self.homs.len()
    }

    pub fn key(&self, w: &[Letter]) -> u64 {
        let mut h = DefaultHasher::new();
        for f in &self.functionals {
            let s: i64 = w.iter().map(|l| f[l.symbol as usize] * l.sign() as i64).sum();
            s.hash(&mut h);
        }
        for hom in &self.homs {
            hom.eval(w).hash(&mut h);
        }
        h.finish()
    }
}

fn exponent_sums(rank: usize, w: &Word) -> Vec<i64> {
    let mut e = vec![0i64; rank];
    for l in w.iter() {
        e[l.symbol as usize] += l.sign() as i64;
    }
    e
}

/// Integer basis of the kernel of the relator exponent-sum matrix.
fn functionals(rank: usize, relators: &[Word]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<Ratio<i64>>> =
        relators.iter().map(|r| exponent_sums(rank, r).into_iter().map(Ratio::from_integer).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..rank {
        let Some(p) = (row..rows.len()).find(|&k| rows[k][col] != Ratio::from_integer(0)) else {
            continue;
        };
        rows.swap(row, p);
        let lead = rows[row][col];
        for x in rows[row].iter_mut() {
            *x /= lead;
        }
        for k in 0..rows.len() {
            if k != row && rows[k][col] != Ratio::from_integer(0) {
                let f = rows[k][col];
                let pivot_row = rows[row].clone();
                for (x, y) in rows[k].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..rank).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Ratio::from_integer(0i64); rank];
            v[f] = Ratio::from_integer(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f];
            }
            let l = v.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
            v.iter().map(|x| (*x * l).to_integer()).collect()
        })
        .collect()
}

fn find_homs(rank: usize, relators: &[Word]) -> Vec<PermHom> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5cc0_4e11);
    let mut homs = Vec::new();
    for degree in [5usize, 6, 7] {
        for _ in 0..20_000 {
            let mut images = Vec::with_capacity(2 * rank);
            for _ in 0..rank {
                let mut p: Vec<u8> = (0..degree as u8).collect();
                p.shuffle(&mut rng);
                let mut g = [0u8; MAX_DEGREE];
                let mut gi = [0u8; MAX_DEGREE];
                for (x, &y) in p.iter().enumerate() {
                    g[x] = y;
                    gi[y as usize] = x as u8;
                }
                images.push(g);
                images.push(gi);
            }
            let hom = PermHom { degree, images };
            let id = hom.eval(&[]);
            let trivial_image = (0..rank).all(|s| hom.image(Letter::gen(s as u16))[..degree] == id[..degree]);
            if !trivial_image && relators.iter().all(|r| hom.eval(r) == id) {
                homs.push(hom);
                break;
            }
        }
    }
    homs
}
