mod common;

use common::*;
use proptest::prelude::*;
use qverify::classical::iterations_for;
use qverify::gadgets::{
    controlled_grover_power, exists_gadget, f_step, grover_iterate, not_gate, prep_uniform_range, BitOracle,
};
use qverify::sim::{bits_for, Engine, Gate};
use qverify::{Error, ErrorBudget, TruthTableOracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prepared(m: u64, width: usize) -> Engine {
    let p = prep_uniform_range(m, width).unwrap();
    let mut e = Engine::for_program(&p, 28).unwrap();
    e.run(&p).unwrap();
    e
}

fn amplitude_profile_ok(m: u64, width: usize) -> bool {
    let e = prepared(m, width);
    let want = 1.0 / (m as f64).sqrt();
    e.state().amplitudes().iter().enumerate().all(|(v, a)| {
        // The counter's first qubit is qubit 0 but the most significant bit.
        let value = (0..width).fold(0, |acc, i| (acc << 1) | ((v >> i) & 1)) as u64;
        let expect = if (1..=m).contains(&value) { want } else { 0.0 };
        (a.re - expect).abs() < 1e-9 && a.im.abs() < 1e-9
    })
}

#[test]
fn prep_examples() {
    let e = prepared(1, 1);
    assert!((e.probability_of(&e.registers()[0], 1).unwrap() - 1.0).abs() < 1e-12);
    assert!(amplitude_profile_ok(4, 3));
    assert!(amplitude_profile_ok(3, 2));
    let e = prepared(3, 2);
    assert!((e.probability_of(&e.registers()[0], 2).unwrap() - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn prep_exact_for_every_small_range() {
    for m in 1..=16 {
        assert!(amplitude_profile_ok(m, bits_for(m)), "m={m}");
        assert!(amplitude_profile_ok(m, bits_for(m) + 1), "m={m} wide");
    }
}

#[test]
fn prep_rejects_narrow_counter() {
    assert!(matches!(prep_uniform_range(4, 2), Err(Error::WidthTooSmall { .. })));
    assert!(matches!(prep_uniform_range(0, 2), Err(Error::WidthTooSmall { .. })));
}

fn iterate_marked(table: &TruthTableOracle, j: u64) -> f64 {
    let n = table.num_bits();
    let oracle = BitOracle::table(table.clone());
    let it = grover_iterate(&oracle, n).unwrap();
    let mut e = Engine::for_program(&it, 28).unwrap();
    let x = it.register("x").unwrap().clone();
    for &q in x.qubits() {
        e.apply(&Gate::h(q)).unwrap();
    }
    for _ in 0..j {
        e.run(&it).unwrap();
    }
    marked_probability(&e, &x, table)
}

#[test]
fn grover_iterate_examples() {
    let one = TruthTableOracle::from_bit_str("0100").unwrap();
    assert!((iterate_marked(&one, 1) - 1.0).abs() < 1e-9);
    let none = TruthTableOracle::from_bit_str("0000").unwrap();
    assert!(iterate_marked(&none, 3).abs() < 1e-12);
    let sixteen = TruthTableOracle::from_fn(4, |i| i == 11);
    let p = iterate_marked(&sixteen, 3);
    assert!((p - grover_formula(16.0, 1.0, 3)).abs() < 1e-9);
    assert!((p - 0.9613).abs() < 1e-4);
}

#[test]
fn grover_iterate_with_no_solution_keeps_uniform() {
    let none = TruthTableOracle::from_bit_str("0000").unwrap();
    let it = grover_iterate(&BitOracle::table(none), 2).unwrap();
    let mut e = Engine::for_program(&it, 28).unwrap();
    e.apply(&Gate::h(0)).unwrap();
    e.apply(&Gate::h(1)).unwrap();
    let before = e.state().clone();
    e.run(&it).unwrap();
    assert!((before.inner(e.state()).norm() - 1.0).abs() < 1e-9);
}

#[test]
fn grover_iterate_checks_width() {
    let t = TruthTableOracle::from_bit_str("0100").unwrap();
    assert!(matches!(grover_iterate(&BitOracle::table(t), 3), Err(Error::WidthMismatch { .. })));
}

fn power_marked(table: &TruthTableOracle, m: u64, counter: &[u64]) -> f64 {
    let n = table.num_bits();
    let w = bits_for(m);
    let p = controlled_grover_power(m, w, &BitOracle::table(table.clone()), n).unwrap();
    let mut e = Engine::for_program(&p, 28).unwrap();
    let c = p.register("counter").unwrap().clone();
    match counter {
        [v] => e.write_value(&c, *v).unwrap(),
        _ => e.run(&prep_uniform_range(m, w).unwrap()).unwrap(),
    }
    e.run(&p).unwrap();
    marked_probability(&e, p.register("x").unwrap(), table)
}

#[test]
fn controlled_power_examples() {
    let one = TruthTableOracle::from_bit_str("0010").unwrap();
    assert!((power_marked(&one, 2, &[2]) - 0.25).abs() < 1e-9);
    assert!((power_marked(&one, 2, &[1, 2]) - 0.625).abs() < 1e-9);
    assert!((power_marked(&one, 1, &[1]) - 1.0).abs() < 1e-9);
}

#[test]
fn controlled_power_averages_branches() {
    for n in 2..=4usize {
        let size = 1u64 << n;
        let m = iterations_for(n);
        for t in 0..=size {
            let table = TruthTableOracle::from_fn(n, |i| (i as u64) < t);
            let want: f64 = (1..=m).map(|j| grover_formula(size as f64, t as f64, j)).sum::<f64>() / m as f64;
            let got = power_marked(&table, m, &[]);
            assert!((got - want).abs() < 1e-6, "n={n} t={t}: {got} vs {want}");
            if t >= 1 {
                assert!(got >= 0.25 - 1e-9, "n={n} t={t}: {got}");
            }
        }
    }
}

fn basis_run(p: &qverify::sim::UnitaryProgram, index: usize) -> Vec<(usize, f64)> {
    let s = qverify::sim::StateVector::basis(p.num_qubits(), index);
    run_on(p, s)
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, a)| (i, a.re))
        .collect()
}

// qubit 0 = result, 1 = controller, 2 = subject; `rcs` spells r, c, s.
fn rcs(r: usize, c: usize, s: usize) -> usize {
    r | c << 1 | s << 2
}

#[test]
fn f_step_table() {
    let p = f_step();
    let rows = [
        ((0, 0, 0), (0, 0, 0)),
        ((0, 0, 1), (1, 0, 1)),
        ((0, 1, 0), (0, 1, 0)),
        ((0, 1, 1), (0, 1, 1)),
        ((1, 0, 0), (1, 0, 0)),
        ((1, 0, 1), (1, 1, 1)),
        ((1, 1, 0), (1, 1, 0)),
        ((1, 1, 1), (0, 0, 1)),
    ];
    let mut images = Vec::new();
    for ((r, c, s), (r2, c2, s2)) in rows {
        let out = basis_run(&p, rcs(r, c, s));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, rcs(r2, c2, s2), "row {r}{c}{s}");
        assert!((out[0].1 - 1.0).abs() < 1e-12);
        images.push(out[0].0);
    }
    images.sort();
    assert_eq!(images, (0..8).collect::<Vec<_>>());
}

#[test]
fn exists_gadget_is_or() {
    for m in 1..=5usize {
        let p = exists_gadget(m).unwrap();
        for sigma in 0..1usize << m {
            let out = basis_run(&p, sigma);
            assert_eq!(out.len(), 1);
            let or = usize::from(sigma != 0);
            assert_eq!(out[0].0, sigma | or << (2 * m + 1), "m={m} sigma={sigma:b}");
            assert!((out[0].1 - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn exists_gadget_gate_count_is_linear() {
    let counts: Vec<usize> = (1..=6).map(|m| exists_gadget(m).unwrap().gates().len()).collect();
    for w in counts.windows(2) {
        assert_eq!(w[1] - w[0], counts[1] - counts[0]);
    }
}

#[test]
fn exists_gadget_works_on_superpositions() {
    let m = 3;
    let p = exists_gadget(m).unwrap();
    let mut e = Engine::for_program(&p, 28).unwrap();
    for q in 0..m {
        e.apply(&Gate::h(q)).unwrap();
    }
    e.run(&p).unwrap();
    let anc = p.register("ancilla").unwrap();
    assert!((e.zero_fidelity(&anc.qubits()[..m + 1]).unwrap() - 1.0).abs() < 1e-12);
    let out = qverify::sim::Register::new("o", vec![anc.qubit(m + 1)]);
    assert!((e.probability_of(&out, 1).unwrap() - 7.0 / 8.0).abs() < 1e-12);
}

#[test]
fn not_gate_flips() {
    let p = not_gate();
    assert_eq!(basis_run(&p, 0)[0].0, 1);
    assert_eq!(basis_run(&p, 1)[0].0, 0);
    let mut e = Engine::for_program(&p, 28).unwrap();
    e.run(&p).unwrap();
    e.run(&p).unwrap();
    assert!((e.state().amplitude(0).re - 1.0).abs() < 1e-12);
}

#[test]
fn budget_rules() {
    assert!(ErrorBudget::new(0.25, 0.125, 3).is_ok());
    assert!(matches!(ErrorBudget::new(0.2, 0.15, 3), Err(Error::BudgetInvalid(_))));
    assert!(matches!(ErrorBudget::new(0.25, 0.125, 2), Err(Error::BudgetInvalid(_))));
    assert_eq!(ErrorBudget::from_blocks(4).unwrap().blocks(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gadgets_invert(seed in any::<u64>(), m in 1u64..=6, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = TruthTableOracle::from_fn(n, |i| (seed >> (i % 64)) & 1 == 1);
        let oracle = BitOracle::table(table);
        let programs = [
            prep_uniform_range(m, bits_for(m)).unwrap(),
            grover_iterate(&oracle, n).unwrap(),
            controlled_grover_power(m, bits_for(m), &oracle, n).unwrap(),
            exists_gadget(m as usize).unwrap(),
            f_step(),
        ];
        for p in &programs {
            let s = random_state(&mut rng, p.num_qubits());
            let back = run_on(&p.inverse(), run_on(p, s.clone()));
            prop_assert!(back.distance(&s) < 1e-9);
        }
    }
}
