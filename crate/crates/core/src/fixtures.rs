//! Named matrices, witnesses and block maps from the worked examples.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::oracle::{BlockMap, EdgeShift};
use crate::witnesses::{BalancedWitness, ElementarySseWitness, SeWitness, Witness};

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("fixture matrices are rectangular")
}

/// `[[2k, 0, 4k], [k, 2k, 0], [k, 2k, 0]]`.
pub fn bff_matrix(k: i64) -> IntMatrix {
    m(&[&[2 * k, 0, 4 * k], &[k, 2 * k, 0], &[k, 2 * k, 0]])
}

/// `[[1, k], [k - 1, 1]]` and `[[1, k(k - 1)], [1, 1]]`.
pub fn similar_pair(k: i64) -> (IntMatrix, IntMatrix) {
    (m(&[&[1, k], &[k - 1, 1]]), m(&[&[1, k * (k - 1)], &[1, 1]]))
}

fn ashley() -> IntMatrix {
    // vertices a..h
    let out: [&[usize]; 8] = [&[0, 2], &[0, 1], &[4, 5], &[1, 7], &[6, 3], &[3, 4], &[7, 2], &[5, 6]];
    let mut a = IntMatrix::zeros(8, 8);
    for (i, targets) in out.iter().enumerate() {
        for &j in *targets {
            a.set(i, j, 1);
        }
    }
    a
}

pub const MATRIX_NAMES: &[&str] = &[
    "ex3.1-A",
    "ex3.1-B",
    "ex3.5-k3-A",
    "ex3.5-k3-B",
    "ex3.5-k4-A",
    "ex3.5-k4-B",
    "kim-roush-A",
    "kim-roush-B",
    "ex4.1-A",
    "ex4.1-C",
    "ex5.2-A",
    "ex5.2-B",
    "ex6.2-A",
    "ex6.2-B",
    "ex6.4-k1",
    "ex6.4-k2",
    "ex6.4-k3",
    "ex6.5-A",
    "ex6.5-B",
    "ashley",
    "rourke-A",
    "rourke-B",
    "two",
    "golden-mean",
    "cuntz-splice",
    "ex8.7-A",
    "ex8.7-B",
];

pub fn matrix(name: &str) -> Result<IntMatrix> {
    Ok(match name {
        "ex3.1-A" | "ex4.1-A" => m(&[&[1, 1], &[2, 0]]),
        "ex3.1-B" => m(&[&[1, 0, 1], &[1, 0, 1], &[1, 1, 0]]),
        "ex3.5-k3-A" => similar_pair(3).0,
        "ex3.5-k3-B" => similar_pair(3).1,
        "ex3.5-k4-A" => similar_pair(4).0,
        "ex3.5-k4-B" => similar_pair(4).1,
        "kim-roush-A" => m(&[
            &[0, 0, 1, 1, 3, 0, 0],
            &[1, 0, 0, 0, 3, 0, 0],
            &[0, 1, 0, 0, 3, 0, 0],
            &[0, 0, 1, 0, 3, 0, 0],
            &[0, 0, 0, 0, 0, 0, 1],
            &[1, 1, 1, 1, 10, 0, 0],
            &[1, 1, 1, 1, 0, 1, 0],
        ]),
        "kim-roush-B" => m(&[
            &[0, 0, 1, 1, 3, 0, 0],
            &[1, 0, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0, 1],
            &[4, 5, 6, 3, 10, 0, 0],
            &[4, 5, 6, 3, 0, 1, 0],
        ]),
        "ex4.1-C" => m(&[&[1, 1, 0], &[0, 0, 1], &[2, 2, 0]]),
        "ex5.2-A" | "ex6.5-A" => m(&[&[0, 2, 2], &[1, 0, 0], &[1, 0, 0]]),
        "ex5.2-B" | "ex6.5-B" => m(&[&[0, 3, 1], &[1, 0, 0], &[1, 0, 0]]),
        "ex6.2-A" => m(&[&[0, 2], &[2, 0]]),
        "ex6.2-B" => m(&[&[2, 0], &[0, 2]]),
        "ex6.4-k1" => bff_matrix(1),
        "ex6.4-k2" => bff_matrix(2),
        "ex6.4-k3" => bff_matrix(3),
        "ashley" => ashley(),
        "rourke-A" => m(&[&[1, 2, 1], &[1, 1, 0], &[1, 0, 1]]),
        "rourke-B" => m(&[&[1, 0, 1, 0, 1], &[0, 1, 1, 1, 0], &[1, 1, 1, 0, 0], &[1, 0, 0, 0, 1], &[0, 1, 0, 1, 0]]),
        "two" => m(&[&[2]]),
        "golden-mean" => m(&[&[1, 1], &[1, 0]]),
        "cuntz-splice" => m(&[&[2, 1, 0], &[1, 1, 1], &[0, 1, 1]]),
        "ex8.7-A" => m(&[&[1, 1, 1], &[1, 1, 1], &[1, 0, 0]]),
        "ex8.7-B" => m(&[&[1, 1, 1], &[1, 1, 0], &[1, 1, 0]]),
        _ => return Err(Error::UnknownFixture(name.into())),
    })
}

/// A witness together with the pair it relates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFixture {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub witness: Witness,
}

pub const WITNESS_NAMES: &[&str] =
    &["ex3.1-inconsistent", "ex3.1-corrected", "ex3.5-k3", "ex5.2", "ex6.4-k1", "ex6.4-k2", "ex6.4-k3"];

/// `S, R1, R2` relating `A_k` to `S R2`, whose total amalgamation is `(4k)`.
pub fn bff_witness(k: i64) -> BalancedWitness {
    BalancedWitness {
        s: m(&[&[1, 0], &[0, 1], &[0, 1]]),
        r1: m(&[&[2 * k, 0, 4 * k], &[k, 2 * k, 0]]),
        r2: m(&[&[2 * k, 2 * k, 2 * k], &[k, k, k]]),
    }
}

pub fn witness(name: &str) -> Result<WitnessFixture> {
    let bff = |k: i64| {
        let w = bff_witness(k);
        let b = w.s.checked_mul(&w.r2).expect("shapes agree");
        WitnessFixture { a: bff_matrix(k), b, witness: Witness::Balanced(w) }
    };
    Ok(match name {
        // claimed `B = RS`, `SR = A`; the first product is wrong in row 3
        "ex3.1-inconsistent" => WitnessFixture {
            a: matrix("ex3.1-B")?,
            b: matrix("ex3.1-A")?,
            witness: Witness::Sse(ElementarySseWitness {
                r: m(&[&[1, 0], &[1, 0], &[1, 1]]),
                s: m(&[&[1, 0, 1], &[0, 1, 0]]),
            }),
        },
        "ex3.1-corrected" => WitnessFixture {
            a: matrix("ex3.1-A")?,
            b: matrix("ex3.1-B")?,
            witness: Witness::Sse(ElementarySseWitness {
                r: m(&[&[1, 0, 1], &[1, 1, 0]]),
                s: m(&[&[1, 0], &[1, 0], &[0, 1]]),
            }),
        },
        "ex3.5-k3" => WitnessFixture {
            a: matrix("ex3.5-k3-A")?,
            b: matrix("ex3.5-k3-B")?,
            witness: Witness::Se(SeWitness { r: m(&[&[8, 3], &[1, 16]]), s: m(&[&[2, 3], &[1, 1]]), lag: 3 }),
        },
        "ex5.2" => WitnessFixture {
            a: matrix("ex5.2-A")?,
            b: matrix("ex5.2-B")?,
            witness: Witness::Balanced(BalancedWitness {
                s: m(&[&[1, 0], &[0, 1], &[0, 1]]),
                r1: m(&[&[0, 2, 2], &[1, 0, 0]]),
                r2: m(&[&[0, 3, 1], &[1, 0, 0]]),
            }),
        },
        "ex6.4-k1" => bff(1),
        "ex6.4-k2" => bff(2),
        "ex6.4-k3" => bff(3),
        _ => return Err(Error::UnknownFixture(name.into())),
    })
}

/// A block map between named edge shifts, with an optional inverse and the
/// delay at which the pair is an eventual conjugacy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMapFixture {
    pub source: EdgeShift,
    pub target: EdgeShift,
    pub map: BlockMap,
    pub inverse: Option<BlockMap>,
    pub delay: usize,
}

pub const BLOCK_MAP_NAMES: &[&str] = &["ex4.1", "ex5.2"];

fn named(a: &IntMatrix, names: &[&str]) -> Result<EdgeShift> {
    EdgeShift::with_names(a, names.iter().map(|s| s.to_string()).collect())
}

/// The recoding `X_A -> X_C` reads two symbols, so an input of length 8
/// has an image of length 7.
fn recoding() -> Result<BlockMapFixture> {
    let source = named(&matrix("ex4.1-A")?, &["e", "f", "g", "h"])?;
    let target = named(&matrix("ex4.1-C")?, &["e1", "e2", "f1", "g1", "h1", "g2", "h2"])?;
    let rows = [
        ("ee", "e1"),
        ("ef", "e2"),
        ("fg", "f1"),
        ("fh", "f1"),
        ("ge", "g1"),
        ("gf", "g2"),
        ("he", "h1"),
        ("hf", "h2"),
    ];
    let mut table = BTreeMap::new();
    for (block, image) in rows {
        table.insert(source.parse_word(block)?, target.symbol(image).expect("fixture symbol"));
    }
    let inverse = BlockMap::sliding(
        1,
        [("e1", "e"), ("e2", "e"), ("f1", "f"), ("g1", "g"), ("g2", "g"), ("h1", "h"), ("h2", "h")]
            .iter()
            .map(|(y, x)| (vec![target.symbol(y).expect("fixture symbol")], source.symbol(x).expect("fixture symbol")))
            .collect(),
    );
    Ok(BlockMapFixture { map: BlockMap::sliding(2, table), inverse: Some(inverse), delay: 0, source, target })
}

/// `y_i = e'` if `x_(i-1) = c`, otherwise `y_i = x_i'`; the inverse undoes
/// the substitution after `c'`.
fn delayed() -> Result<BlockMapFixture> {
    let source = named(&matrix("ex5.2-A")?, &["a", "b", "c", "d", "e", "f"])?;
    let target = named(&matrix("ex5.2-B")?, &["a'", "b'", "c'", "d'", "e'", "f'"])?;
    // symbols are listed in matching order, so priming keeps the index
    let (c, e, f) = (2, 4, 5);
    let primed: BTreeMap<Vec<usize>, usize> = (0..6).map(|x| (vec![x], x)).collect();
    let map = BlockMap {
        window: 2,
        memory: 1,
        table: source.words(2).into_iter().map(|w| (w.clone(), if w[0] == c { e } else { w[1] })).collect(),
        head: vec![primed.clone()],
    };
    let inverse = BlockMap {
        window: 2,
        memory: 1,
        table: target.words(2).into_iter().map(|w| (w.clone(), if w[0] == c { f } else { w[1] })).collect(),
        head: vec![primed],
    };
    Ok(BlockMapFixture { source, target, map, inverse: Some(inverse), delay: 1 })
}

pub fn block_map(name: &str) -> Result<BlockMapFixture> {
    match name {
        "ex4.1" => recoding(),
        "ex5.2" => delayed(),
        _ => Err(Error::UnknownFixture(name.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{char_poly, Polynomial};
    use crate::oracle::{verify_conjugacy, verify_eventual_conjugacy_map};

    #[test]
    fn every_name_resolves() {
        for name in MATRIX_NAMES {
            matrix(name).unwrap().check_adjacency().unwrap();
        }
        for name in WITNESS_NAMES {
            witness(name).unwrap();
        }
        for name in BLOCK_MAP_NAMES {
            block_map(name).unwrap();
        }
        assert!(matches!(matrix("ex9.9"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn ashley_characteristic_polynomial() {
        let p = char_poly(&matrix("ashley").unwrap()).unwrap();
        assert_eq!(p, Polynomial::from_i64(&[0, 0, 0, 0, 0, 0, 0, -2, 1]));
    }

    #[test]
    fn witnesses_verify_as_documented() {
        for name in ["ex3.1-corrected", "ex3.5-k3", "ex5.2", "ex6.4-k1", "ex6.4-k2", "ex6.4-k3"] {
            let f = witness(name).unwrap();
            assert!(f.witness.verify(&f.a, &f.b).unwrap().is_yes(), "{name}");
        }
        let f = witness("ex3.1-inconsistent").unwrap();
        let no = f.witness.verify(&f.a, &f.b).unwrap().no().unwrap();
        assert_eq!((no.relation.as_str(), no.row, no.col), ("A = RS", 2, 2));
    }

    #[test]
    fn block_maps_verify() {
        let f = block_map("ex4.1").unwrap();
        assert!(verify_conjugacy(&f.map, &f.source, &f.target, 6).unwrap().is_yes());
        let inv = f.inverse.unwrap();
        assert!(verify_eventual_conjugacy_map(&f.map, &inv, 0, &f.source, &f.target, 4).unwrap().is_yes());

        let f = block_map("ex5.2").unwrap();
        let inv = f.inverse.unwrap();
        assert!(verify_eventual_conjugacy_map(&f.map, &inv, 1, &f.source, &f.target, 6).unwrap().is_yes());
        assert!(verify_eventual_conjugacy_map(&f.map, &inv, 0, &f.source, &f.target, 6).unwrap().is_no());
    }
}
