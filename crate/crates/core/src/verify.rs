//! Verification campaigns: datapath against the CRT reference, operand words
//! against their coefficient definitions, and channel arithmetic against
//! big-integer arithmetic modulo `M`.
//!
//! Inputs are drawn sequentially from a `ChaCha8Rng` seeded with the
//! user-supplied seed, then checked in parallel. Failures are reported sorted
//! by input, so a fixed seed gives identical output on every platform.

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{rns_op, Op};
use crate::converter::{prepare_operands, raw_operands, reverse_convert};
use crate::error::{Result, RnsError};
use crate::moduli::{crt_reconstruct, forward_convert, ModuliSet, ResidueVector};

/// Largest `n` for which exhaustive enumeration is offered (`M = 32760`).
pub const MAX_EXHAUSTIVE_N: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub unit: &'static str,
    pub checked: u64,
    /// Human-readable description of each failing input, sorted.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub n: u32,
    pub range: BigUint,
    pub mode: Mode,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.suites.iter().map(|s| s.failures.len()).sum()
    }

    pub fn render(&self, max_listed: usize) -> String {
        let mut out = match self.mode {
            Mode::Exhaustive => format!("verify n={} M={} mode=exhaustive\n", self.n, self.range),
            Mode::Random { samples, seed } => format!(
                "verify n={} M={} mode=random samples={samples} seed={seed} prng=chacha8\n",
                self.n, self.range
            ),
        };
        for s in &self.suites {
            out.push_str(&format!(
                "{}: checked {} {}, {} failures\n",
                s.name,
                s.checked,
                s.unit,
                s.failures.len()
            ));
            for f in s.failures.iter().take(max_listed) {
                out.push_str(&format!("  fail {f}\n"));
            }
        }
        out.push_str(if self.failures() == 0 {
            "result: ok\n"
        } else {
            "result: FAILED\n"
        });
        out
    }
}

fn to_u64(v: &BigUint) -> u64 {
    v.try_into().expect("exhaustive ranges fit in u64")
}

fn collect_failures<T, F>(inputs: &[T], check: F) -> Vec<String>
where
    T: Sync,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    // `collect` on an indexed parallel iterator keeps input order.
    inputs.par_iter().filter_map(check).collect()
}

/// Decoding `forward_convert(x)` must give back `x` on both routes.
pub fn check_roundtrip(set: &ModuliSet, x: &BigUint) -> Option<String> {
    let rv = match forward_convert(set, x) {
        Ok(rv) => rv,
        Err(e) => return Some(format!("X={x}: {e}")),
    };
    let datapath = reverse_convert(set, &rv);
    let reference = crt_reconstruct(set, &rv);
    match (datapath, reference) {
        (Ok(a), Ok(b)) if &a == x && &b == x => None,
        (a, b) => Some(format!("X={x}: datapath {a:?}, crt {b:?}")),
    }
}

/// The coefficient identities each prepared word must satisfy modulo `2^4n - 1`.
pub fn check_operand_lemmas(set: &ModuliSet, rv: &ResidueVector) -> Option<String> {
    let n = set.n();
    let one = BigUint::one();
    let q = (&one << (4 * n)) - &one;
    let raw = match raw_operands(set, rv) {
        Ok(r) => r,
        Err(e) => return Some(format!("{rv}: {e}")),
    };
    let ops = prepare_operands(set, rv).expect("residues already checked");

    let s1 = (&q - (((&one << (3 * n)) * &rv.r1) % &q)) % &q;
    let c2 = (&one << (3 * n - 1)) + (&one << (n - 1));
    let c3 = (&one << (3 * n - 1)) - (&one << (n - 1));
    let s2 = (c2 * &rv.r2) % &q;
    let s3 = (c3 * &rv.r3) % &q;

    let mut bad = Vec::new();
    if raw.s1.value() % &q != s1 {
        bad.push("S1");
    }
    if ops.s2.value() != &s2 {
        bad.push("S2");
    }
    if (raw.s31.value() + raw.s32.value()) % &q != s3 {
        bad.push("S3");
    }
    if (raw.s1.value() + raw.s32.value()) % &q != ops.s1_prime.value() % &q {
        bad.push("merge");
    }
    if ops.s31 != raw.s31 || ops.width() != 4 * n {
        bad.push("layout");
    }
    if bad.is_empty() {
        None
    } else {
        Some(format!("{rv}: {}", bad.join(",")))
    }
}

/// Channel-wise `a op b` must encode `(x op y) mod M`.
pub fn check_homomorphism(set: &ModuliSet, op: Op, x: &BigUint, y: &BigUint) -> Option<String> {
    let m = set.range();
    let expect = match op {
        Op::Add => (x + y) % m,
        Op::Sub => (x + m - y) % m,
        Op::Mul => (x * y) % m,
    };
    let got = forward_convert(set, x)
        .and_then(|a| forward_convert(set, y).map(|b| (a, b)))
        .and_then(|(a, b)| rns_op(set, op, &a, &b));
    match got {
        Ok(rv) if crt_reconstruct(set, &rv).ok().as_ref() == Some(&expect) => None,
        other => Some(format!("X={x} Y={y} op={op:?}: {other:?}")),
    }
}

/// Residue vectors covering each channel exhaustively: every `(R1, R3)`
/// combination for the merge identity, and every `R2`.
fn exhaustive_residues(set: &ModuliSet) -> Vec<ResidueVector> {
    let [m1, m2, m3] = set.moduli().clone().map(|m| to_u64(&m));
    let mut out = Vec::new();
    for r1 in 0..m1 {
        for r3 in 0..m3 {
            out.push(ResidueVector::new(r1, 0u32, r3));
        }
    }
    out.extend((0..m2).map(|r2| ResidueVector::new(0u32, r2, 0u32)));
    out
}

fn random_residues(set: &ModuliSet, rng: &mut ChaCha8Rng, count: u64) -> Vec<ResidueVector> {
    let [m1, m2, m3] = set.moduli();
    (0..count)
        .map(|_| {
            ResidueVector::new(
                rng.gen_biguint_below(m1),
                rng.gen_biguint_below(m2),
                rng.gen_biguint_below(m3),
            )
        })
        .collect()
}

const OPS: [Op; 3] = [Op::Add, Op::Sub, Op::Mul];

pub fn run(set: &ModuliSet, mode: Mode) -> Result<Report> {
    let m = set.range();
    let (values, residues, pairs) = match mode {
        Mode::Exhaustive => {
            if set.n() > MAX_EXHAUSTIVE_N {
                return Err(RnsError::InvalidParameter(format!(
                    "exhaustive mode supports n <= {MAX_EXHAUSTIVE_N}; use --random for n = {}",
                    set.n()
                )));
            }
            let values: Vec<BigUint> = (0..to_u64(m)).map(BigUint::from).collect();
            // Each X is paired with a pseudo-random partner; full pair
            // enumeration lives in the test suite.
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let pairs: Vec<(BigUint, BigUint)> = values
                .iter()
                .map(|x| (x.clone(), rng.gen_biguint_below(m)))
                .collect();
            (values, exhaustive_residues(set), pairs)
        }
        Mode::Random { samples, seed } => {
            if samples == 0 {
                return Err(RnsError::InvalidParameter("samples must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<BigUint> = (0..samples).map(|_| rng.gen_biguint_below(m)).collect();
            let residues = random_residues(set, &mut rng, samples);
            let pairs = (0..samples)
                .map(|_| (rng.gen_biguint_below(m), rng.gen_biguint_below(m)))
                .collect();
            (values, residues, pairs)
        }
    };

    let mut roundtrip = collect_failures(&values, |x| check_roundtrip(set, x));
    let mut lemmas = collect_failures(&residues, |rv| check_operand_lemmas(set, rv));
    let op_pairs: Vec<(Op, &(BigUint, BigUint))> = pairs
        .iter()
        .flat_map(|p| OPS.iter().map(move |&op| (op, p)))
        .collect();
    let mut homomorphism = collect_failures(&op_pairs, |(op, (x, y))| check_homomorphism(set, *op, x, y));
    roundtrip.sort();
    lemmas.sort();
    homomorphism.sort();

    Ok(Report {
        n: set.n(),
        range: m.clone(),
        mode,
        suites: vec![
            SuiteResult {
                name: "roundtrip",
                unit: "values",
                checked: values.len() as u64,
                failures: roundtrip,
            },
            SuiteResult {
                name: "operand lemmas",
                unit: "residue vectors",
                checked: residues.len() as u64,
                failures: lemmas,
            },
            SuiteResult {
                name: "homomorphism",
                unit: "operations",
                checked: op_pairs.len() as u64,
                failures: homomorphism,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_n1() {
        let set = ModuliSet::new(1).unwrap();
        let r = run(&set, Mode::Exhaustive).unwrap();
        assert_eq!(r.failures(), 0);
        assert_eq!(r.suites[0].checked, 30);
        assert_eq!(r.suites[1].checked, 2 * 5 + 3);
        assert!(r.render(5).contains("roundtrip: checked 30 values, 0 failures"));
    }

    #[test]
    fn exhaustive_guard() {
        let set = ModuliSet::new(4).unwrap();
        assert!(run(&set, Mode::Exhaustive).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let set = ModuliSet::new(8).unwrap();
        let mode = Mode::Random {
            samples: 200,
            seed: 3,
        };
        let a = run(&set, mode).unwrap().render(10);
        let b = run(&set, mode).unwrap().render(10);
        assert_eq!(a, b);
        assert!(a.ends_with("result: ok\n"));
    }

    #[test]
    fn detects_a_bad_residue() {
        let set = ModuliSet::new(2).unwrap();
        let msg = check_operand_lemmas(&set, &ResidueVector::new(0u32, 99u32, 0u32));
        assert!(msg.is_some());
    }
}
