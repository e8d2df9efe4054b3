//! Seeded synthetic benchmark kernels.

use std::collections::BTreeSet;

use rand::seq::{index::sample, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pauli::{block_angle_ref, Kernel, PauliOp, PauliString, TetrisBlock};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("need at least {min} qubits, got {n}")]
    TooFewQubits { n: usize, min: usize },
    #[error("no {degree}-regular graph on {n} vertices")]
    InfeasibleRegular { n: usize, degree: usize },
    #[error("single-excitation fraction {0} is outside [0, 1]")]
    BadFraction(String),
}

/// Operators on the four pivots of a double excitation, with the sign of
/// each term's weight.
const DOUBLE_TERMS: [(&str, f64); 8] = [
    ("XXXY", 1.0),
    ("XXYX", 1.0),
    ("XYXX", 1.0),
    ("YXXX", 1.0),
    ("YYYX", -1.0),
    ("YYXY", -1.0),
    ("YXYY", -1.0),
    ("XYYY", -1.0),
];

fn op(c: char) -> PauliOp {
    PauliOp::from_char(c).expect("constant table uses valid operators")
}

/// Jordan-Wigner shaped strings: pivot operators on `pivots`, Z strictly
/// between consecutive pivot pairs `(p0, p1)`, `(p2, p3)`, ...
fn padded(n: usize, pivots: &[usize], ops: &str, weight: f64, angle_ref: &str) -> PauliString {
    let mut word = vec![PauliOp::I; n];
    for pair in pivots.chunks(2) {
        if let [a, b] = *pair {
            for w in word.iter_mut().take(b).skip(a + 1) {
                *w = PauliOp::Z;
            }
        }
    }
    for (&p, c) in pivots.iter().zip(ops.chars()) {
        word[p] = op(c);
    }
    PauliString::new(word, weight, angle_ref)
}

/// Single excitation `(i, j)`: `X Z..Z X` and `Y Z..Z Y`.
pub fn single_excitation(n: usize, i: usize, j: usize, angle_ref: &str) -> Vec<PauliString> {
    vec![
        padded(n, &[i, j], "XX", 0.5, angle_ref),
        padded(n, &[i, j], "YY", 0.5, angle_ref),
    ]
}

/// Double excitation over sorted pivots `i < j < k < l`: eight strings.
pub fn double_excitation(n: usize, pivots: [usize; 4], angle_ref: &str) -> Vec<PauliString> {
    DOUBLE_TERMS
        .iter()
        .map(|&(ops, sign)| padded(n, &pivots, ops, sign / 8.0, angle_ref))
        .collect()
}

/// `n_blocks` random excitation blocks on `n` qubits. Each block is a single
/// excitation with probability `single_fraction`, otherwise a double one.
pub fn gen_ucc(n: usize, n_blocks: usize, single_fraction: f64, seed: u64) -> Result<Kernel, GenerateError> {
    if n < 4 {
        return Err(GenerateError::TooFewQubits { n, min: 4 });
    }
    if !(0.0..=1.0).contains(&single_fraction) {
        return Err(GenerateError::BadFraction(single_fraction.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = (0..n_blocks)
        .map(|b| {
            let angle = block_angle_ref(b);
            let single = single_fraction > 0.0 && rng.gen_bool(single_fraction);
            let strings = if single {
                let mut p = sample(&mut rng, n, 2).into_vec();
                p.sort_unstable();
                single_excitation(n, p[0], p[1], &angle)
            } else {
                let mut p = sample(&mut rng, n, 4).into_vec();
                p.sort_unstable();
                double_excitation(n, [p[0], p[1], p[2], p[3]], &angle)
            };
            TetrisBlock::new(strings)
        })
        .collect();
    Ok(Kernel { n_qubits: n, blocks })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QaoaGraph {
    /// Erdos-Renyi style graph with the given edge density.
    Random {
        density: f64,
    },
    Regular {
        degree: usize,
    },
}

fn zz_kernel(n: usize, edges: &BTreeSet<(usize, usize)>) -> Kernel {
    let blocks = edges
        .iter()
        .enumerate()
        .map(|(b, &(u, v))| {
            let mut word = vec![PauliOp::I; n];
            word[u] = PauliOp::Z;
            word[v] = PauliOp::Z;
            TetrisBlock::new(vec![PauliString::new(word, 1.0, block_angle_ref(b))])
        })
        .collect();
    Kernel { n_qubits: n, blocks }
}

/// Random graph edges: exactly `round(density * n(n-1)/2)` distinct pairs.
pub fn random_graph_edges(n: usize, density: f64, rng: &mut impl Rng) -> BTreeSet<(usize, usize)> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = ((density * pairs.len() as f64).round() as usize).min(pairs.len());
    sample(rng, pairs.len(), m).into_iter().map(|i| pairs[i]).collect()
}

/// Uniform-ish regular graph by the pairing model, retrying on loops or
/// repeated edges.
pub fn regular_graph_edges(
    n: usize,
    degree: usize,
    rng: &mut impl Rng,
) -> Result<BTreeSet<(usize, usize)>, GenerateError> {
    let infeasible = GenerateError::InfeasibleRegular { n, degree };
    if degree >= n || (n * degree) % 2 == 1 {
        return Err(infeasible);
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    'attempt: for _ in 0..10_000 {
        stubs.shuffle(rng);
        let mut edges = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Ok(edges);
    }
    Err(infeasible)
}

/// One single-string `ZZ` block per graph edge.
pub fn gen_qaoa(graph: QaoaGraph, n: usize, seed: u64) -> Result<Kernel, GenerateError> {
    if n < 3 {
        return Err(GenerateError::TooFewQubits { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match graph {
        QaoaGraph::Random { density } => random_graph_edges(n, density, &mut rng),
        QaoaGraph::Regular { degree } => regular_graph_edges(n, degree, &mut rng)?,
    };
    Ok(zz_kernel(n, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{build_tetris_ir, emit_kernel, parse_kernel};

    fn words(strings: &[PauliString]) -> Vec<String> {
        strings.iter().map(|s| s.word()).collect()
    }

    #[test]
    fn single_excitation_shape() {
        let s = single_excitation(5, 0, 4, "theta0");
        assert_eq!(words(&s), vec!["XZZZX", "YZZZY"]);
    }

    #[test]
    fn double_excitation_leaves_are_z_runs() {
        let strings = double_excitation(9, [0, 3, 5, 8], "theta0");
        assert_eq!(strings.len(), 8);
        assert_eq!(strings[0].word(), "XZZXIXZZY");
        let block = TetrisBlock::new(strings);
        assert_eq!(block.leaf_set, BTreeSet::from([1, 2, 6, 7]));
        assert_eq!(block.root_set, BTreeSet::from([0, 3, 5, 8]));
    }

    #[test]
    fn ucc_is_seeded_and_round_trips() {
        let a = emit_kernel(&gen_ucc(10, 100, 0.0, 7).unwrap());
        let b = emit_kernel(&gen_ucc(10, 100, 0.0, 7).unwrap());
        assert_eq!(a, b);
        let k = parse_kernel(&a).unwrap();
        assert_eq!(k.num_strings(), 800);
        assert_eq!(build_tetris_ir(k.clone()), k);
        assert_ne!(a, emit_kernel(&gen_ucc(10, 100, 0.0, 8).unwrap()));
    }

    #[test]
    fn ucc_with_singles() {
        let k = gen_ucc(6, 50, 1.0, 1).unwrap();
        assert!(k.blocks.iter().all(|b| b.num_strings() == 2));
        assert!(gen_ucc(3, 1, 0.0, 1).is_err());
        assert!(gen_ucc(4, 1, 1.5, 1).is_err());
    }

    #[test]
    fn regular_three_on_sixteen_has_24_edges() {
        let k = gen_qaoa(QaoaGraph::Regular { degree: 3 }, 16, 3).unwrap();
        assert_eq!(k.num_strings(), 24);
        let mut degree = [0usize; 16];
        for b in &k.blocks {
            for q in b.strings[0].support() {
                degree[q] += 1;
            }
        }
        assert!(degree.iter().all(|&d| d == 3));
    }

    #[test]
    fn odd_handshake_is_rejected() {
        assert_eq!(
            gen_qaoa(QaoaGraph::Regular { degree: 3 }, 3, 0),
            Err(GenerateError::InfeasibleRegular { n: 3, degree: 3 })
        );
        assert!(gen_qaoa(QaoaGraph::Regular { degree: 3 }, 5, 0).is_err());
    }

    #[test]
    fn random_graph_uses_density() {
        let k = gen_qaoa(QaoaGraph::Random { density: 0.1 }, 20, 11).unwrap();
        assert_eq!(k.num_strings(), 19);
    }
}
