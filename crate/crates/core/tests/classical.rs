use qverify::classical::{
    block_success, classical_eval, closed_form_success, count_solutions, iterations_for, random_instance,
    InstanceSpec,
};
use qverify::frontend::parse_formula;
use qverify::{Formula, Quantifier, TruthTableOracle, Variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eval(text: &str, bits: &str) -> bool {
    let f = parse_formula(text).unwrap();
    classical_eval(&f, &TruthTableOracle::from_bit_str(bits).unwrap(), &[]).unwrap()
}

#[test]
fn eval_examples() {
    assert!(eval("exists x[2] : p", "0010"));
    assert!(eval("forall x1[1] exists x2[1] : p", "0110"));
    assert!(!eval("forall x[2] : p", "1110"));
    assert!(!eval("exists x1[1] forall x2[1] : p", "0110"));
}

#[test]
fn table_order_is_big_endian() {
    // Asymmetric: only p(x1=1, x2=0) holds.
    let f = parse_formula("free x1[1] exists x2[1] : p").unwrap();
    let t = TruthTableOracle::from_bit_str("0010").unwrap();
    assert!(!classical_eval(&f, &t, &[0]).unwrap());
    assert!(classical_eval(&f, &t, &[1]).unwrap());
}

#[test]
fn count_examples() {
    let t = |s| TruthTableOracle::from_bit_str(s).unwrap();
    assert_eq!(count_solutions(&t("0010"), 0, 0), 1);
    assert_eq!(count_solutions(&t("1111"), 0, 0), 4);
    assert_eq!(count_solutions(&t("0110"), 0, 1), 1);
    assert_eq!(count_solutions(&t("0111"), 1, 1), 2);
}

#[test]
fn closed_form_examples() {
    assert!((closed_form_success(4, 1, 1) - 1.0).abs() < 1e-12);
    assert!((closed_form_success(4, 1, 0) - 0.25).abs() < 1e-12);
    assert_eq!(closed_form_success(16, 0, 5), 0.0);
    assert!((block_success(4, 1, 2) - 0.625).abs() < 1e-12);
    assert_eq!((1..=8).map(iterations_for).collect::<Vec<_>>(), [2, 2, 3, 4, 6, 8, 12, 16]);
}

#[test]
fn random_instances() {
    let f = parse_formula("forall a[2] exists b[2] : p").unwrap();
    let spec = |density, seed| InstanceSpec { formula: f.clone(), density, seed };
    assert_eq!(random_instance(&spec(0.0, 4)).unwrap().1.count_ones(), 0);
    assert_eq!(random_instance(&spec(1.0, 4)).unwrap().1.count_ones(), 16);
    assert_eq!(random_instance(&spec(0.5, 9)).unwrap().1, random_instance(&spec(0.5, 9)).unwrap().1);
    assert!(random_instance(&spec(1.5, 0)).is_err());
}

/// Bottom-up evaluation: fold the table one variable at a time, innermost
/// first, as bitmasks over the remaining index space.
fn iterative_eval(formula: &Formula, table: &TruthTableOracle, free_value: u64) -> bool {
    let mut layer: Vec<bool> = table.bits().to_vec();
    for (q, v) in formula.prefix().iter().rev() {
        let group = 1usize << v.width;
        layer = layer
            .chunks(group)
            .map(|c| {
                let mask = c.iter().enumerate().fold(0u128, |m, (i, &b)| m | (b as u128) << i);
                let full = if group == 128 { u128::MAX } else { (1u128 << group) - 1 };
                match q {
                    Quantifier::Forall => mask == full,
                    Quantifier::Exists => mask != 0,
                }
            })
            .collect();
    }
    layer[free_value as usize]
}

#[test]
fn recursive_and_iterative_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000 {
        let total = rng.gen_range(1..=8usize);
        let mut widths = Vec::new();
        let mut left = total;
        while left > 0 {
            let w = rng.gen_range(1..=left.min(3));
            widths.push(w);
            left -= w;
        }
        let free_count = rng.gen_range(0..widths.len());
        let vars: Vec<Variable> = widths.iter().enumerate().map(|(i, &w)| Variable::new(format!("v{i}"), w)).collect();
        let prefix = vars[free_count..]
            .iter()
            .map(|v| (if rng.gen() { Quantifier::Forall } else { Quantifier::Exists }, v.clone()))
            .collect();
        let f = Formula::new(vars[..free_count].to_vec(), prefix).unwrap();
        let density = rng.gen_range(0.0..1.0);
        let t = TruthTableOracle::new(total, (0..1 << total).map(|_| rng.gen_bool(density)).collect()).unwrap();
        let free_bits = f.free_width();
        let z = rng.gen_range(0..1u64 << free_bits);
        let mut assignment = Vec::new();
        let mut shift = free_bits;
        for v in f.free() {
            shift -= v.width;
            assignment.push((z >> shift) & ((1 << v.width) - 1));
        }
        assert_eq!(classical_eval(&f, &t, &assignment).unwrap(), iterative_eval(&f, &t, z), "case {case}");
    }
}

#[test]
fn counts_sum_to_popcount() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let t = TruthTableOracle::new(n, (0..1 << n).map(|_| rng.gen()).collect()).unwrap();
        assert_eq!(count_solutions(&t, 0, 0), t.count_ones());
        let split = rng.gen_range(0..=n);
        let total: u64 = (0..1u64 << split).map(|p| count_solutions(&t, p, split)).sum();
        assert_eq!(total, t.count_ones());
    }
}
