#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use qverify::classical::{block_success, iterations_for};
use qverify::gadgets::BitOracle;
use qverify::sim::{ry, Control, Engine, Gate, OracleCall, ProgramBuilder, StateVector, UnitaryProgram};
use qverify::{Formula, Quantifier, TruthTableOracle};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_unitary(rng: &mut impl Rng) -> [[C64; 2]; 2] {
    let (a, b, c, d): (f64, f64, f64, f64) = (
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..PI),
        rng.gen_range(0.0..2.0 * PI),
    );
    let (s, co) = (c / 2.0).sin_cos();
    let g = C64::from_polar(1.0, d);
    [
        [g * C64::from_polar(co, 0.0), g * C64::from_polar(-s, b)],
        [g * C64::from_polar(s, a), g * C64::from_polar(co, a + b)],
    ]
}

/// A gate on `n ≥ 3` qubits drawn from every gate kind.
pub fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let mut qs: Vec<usize> = (0..n).collect();
    qs.shuffle(rng);
    match rng.gen_range(0..6) {
        0 => Gate::h(qs[0]),
        1 => Gate::single(qs[0], ry(rng.gen_range(-PI..PI))),
        2 => {
            let k = rng.gen_range(0..3.min(n));
            let controls = qs[1..=k]
                .iter()
                .map(|&q| if rng.gen() { Control::on(q) } else { Control::off(q) })
                .collect();
            Gate::Unitary {
                target: qs[0],
                controls,
                matrix: random_unitary(rng),
            }
        }
        3 => {
            let w = rng.gen_range(1..=3.min(n));
            let mut map: Vec<u32> = (0..1u32 << w).collect();
            map.shuffle(rng);
            Gate::permutation(qs[..w].to_vec(), map).unwrap()
        }
        4 => {
            let w = rng.gen_range(1..=3.min(n));
            let mut entries: Vec<(u64, C64)> = Vec::new();
            for v in 0..1u64 << w {
                if rng.gen() {
                    entries.push((v, C64::from_polar(1.0, rng.gen_range(-PI..PI))));
                }
            }
            Gate::Phase {
                qubits: qs[..w].to_vec(),
                entries: entries.into(),
            }
        }
        _ => {
            let w = rng.gen_range(1..=2.min(n - 1));
            let bits = (0..1 << w).map(|_| rng.gen()).collect();
            let table = TruthTableOracle::new(w, bits).unwrap();
            Gate::Oracle(OracleCall {
                oracle: BitOracle::table(table),
                inputs: qs[1..=w].to_vec(),
                target: qs[0],
                ancillas: Vec::new(),
                layer: None,
                inverse: false,
            })
        }
    }
}

pub fn random_program(rng: &mut impl Rng, n: usize, len: usize) -> UnitaryProgram {
    let mut b = ProgramBuilder::new();
    b.alloc("q", n);
    for _ in 0..len {
        b.push(random_gate(rng, n)).unwrap();
    }
    b.finish()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let mut amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn run_on(program: &UnitaryProgram, state: StateVector) -> StateVector {
    let mut e = Engine::from_state(state, 28).unwrap();
    e.run(program).unwrap();
    e.into_state()
}

/// Probability that register `x` of `engine` holds a value marked by `table`.
pub fn marked_probability(engine: &Engine, x: &qverify::sim::Register, table: &TruthTableOracle) -> f64 {
    (0..table.bits().len() as u64)
        .filter(|&v| table.get(v as usize))
        .map(|v| engine.probability_of(x, v).unwrap())
        .sum()
}

/// sin²((2j+1)θ), sin²θ = t/N, computed from scratch.
pub fn grover_formula(n: f64, t: f64, j: u64) -> f64 {
    let theta = (t / n).sqrt().asin();
    ((2 * j + 1) as f64 * theta).sin().powi(2)
}

fn poisson_binomial(ps: &[f64]) -> Vec<f64> {
    let mut d = vec![1.0];
    for &p in ps {
        let mut next = vec![0.0; d.len() + 1];
        for (t, &w) in d.iter().enumerate() {
            next[t] += w * (1.0 - p);
            next[t + 1] += w * p;
        }
        d = next;
    }
    d
}

/// P(γ = 1) predicted by composing the per-level amplification law: every
/// inner value is treated as an independent coin with its own predicted
/// probability, a block's success is the closed-form mean averaged over the
/// resulting number of marks, and M blocks combine as 1 − (1−q)^M.
pub fn composed_prediction(formula: &Formula, table: &TruthTableOracle, blocks: usize, free_value: u64) -> f64 {
    fn level(f: &Formula, t: &TruthTableOracle, blocks: i32, depth: usize, ctx: u64) -> f64 {
        if depth == f.k() {
            return if t.get(ctx as usize) { 1.0 } else { 0.0 };
        }
        let (q, v) = &f.prefix()[depth];
        let n = v.width;
        let forall = *q == Quantifier::Forall;
        let marks: Vec<f64> = (0..1u64 << n)
            .map(|x| level(f, t, blocks, depth + 1, (ctx << n) | x))
            .map(|p| if forall { 1.0 - p } else { p })
            .collect();
        let m = iterations_for(n);
        let q: f64 = poisson_binomial(&marks)
            .iter()
            .enumerate()
            .map(|(hits, &w)| w * block_success(1 << n, hits as u64, m))
            .sum();
        let p = 1.0 - (1.0 - q).powi(blocks);
        if forall {
            1.0 - p
        } else {
            p
        }
    }
    level(formula, table, blocks as i32, 0, free_value)
}
