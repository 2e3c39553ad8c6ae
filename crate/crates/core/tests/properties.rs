use hjchain::contraction::{contract_fully_by, is_admissible_for_chains_upto};
use hjchain::geometry::end_term;
use hjchain::tsing::MAX_INSERTIONS;
use hjchain::*;
use num_integer::Integer;
use num_rational::Ratio;
use proptest::prelude::*;

fn coprime_pair(max_n: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_filter("coprime", |(n, q)| n.gcd(q) == 1)
}

fn small_fraction(max_n: i64) -> impl Strategy<Value = SmallFraction> {
    coprime_pair(max_n).prop_map(|(n, q)| Fraction::new(n, q).unwrap())
}

fn general_chain() -> impl Strategy<Value = Chain> {
    prop::collection::vec(1i64..=6, 1..=10).prop_map(Chain::new)
}

fn core_chain() -> impl Strategy<Value = Chain> {
    prop_oneof![
        (4i64..=9).prop_map(|e| Chain::new(vec![e])),
        (3i64..=7, prop::collection::vec(2i64..=6, 0..=3), 3i64..=7).prop_map(|(a, mid, b)| {
            let mut v = vec![a];
            v.extend(mid);
            v.push(b);
            Chain::new(v)
        }),
    ]
}

fn steps() -> impl Strategy<Value = Vec<TStep>> {
    prop::collection::vec(prop_oneof![Just(TStep::Left), Just(TStep::Right)], 0..=6)
}

proptest! {
    #[test]
    fn expand_then_evaluate_is_identity(f in small_fraction(500)) {
        let c = f.expand();
        prop_assert!(c.is_strict());
        prop_assert_eq!(c.evaluate::<i64>().unwrap(), (*f.n(), *f.q()));
    }

    #[test]
    fn reversed_chain_gives_inverse(f in small_fraction(500)) {
        let c = f.expand().reversed();
        prop_assert_eq!(c.evaluate::<i64>().unwrap(), (*f.n(), f.inverse()));
        prop_assert_eq!((f.q() * f.inverse()) % f.n(), 1);
    }

    #[test]
    fn expansion_length_bound(f in small_fraction(300)) {
        let len = f.expand().len() as i64;
        prop_assert!(len < *f.n());
        prop_assert_eq!(len == f.n() - 1, *f.q() == f.n() - 1);
    }

    #[test]
    fn chain_with_its_dual_is_zero(f in small_fraction(200)) {
        let c = f.expand()
            .concat(&Chain::from([1]))
            .concat(&f.dual_chain().reversed());
        prop_assert!(c.is_admissible());
        prop_assert_eq!(c.evaluate::<i64>().unwrap().0, 0);
        prop_assert!(contract_fully(&c).unwrap().0.is_zero_singleton());
    }

    #[test]
    fn contraction_preserves_value(c in general_chain()) {
        prop_assume!(c.is_admissible());
        let (p, q) = c.evaluate::<i64>().unwrap();
        prop_assume!(p > 0);
        let (out, trace) = contract_fully(&c).unwrap();
        let (p2, q2) = out.evaluate::<i64>().unwrap();
        prop_assert_eq!(p2, p);
        prop_assert_eq!(q2.mod_floor(&p), q.mod_floor(&p));
        for s in trace.steps() {
            prop_assert_eq!(s.before.entries()[s.index], 1);
        }
    }

    #[test]
    fn contraction_order_does_not_matter(c in general_chain(), picks in prop::collection::vec(any::<usize>(), 12)) {
        prop_assume!(c.is_admissible());
        let left = contract_fully(&c).map(|r| r.0);
        let mut it = picks.into_iter().cycle();
        let random = contract_fully_by(&c, |buf| {
            let ones: Vec<usize> = (0..buf.len()).filter(|&i| buf[i] == 1).collect();
            (!ones.is_empty()).then(|| ones[it.next().unwrap() % ones.len()])
        })
        .map(|r| r.0);
        prop_assert_eq!(left.is_ok(), random.is_ok());
        if let (Ok(a), Ok(b)) = (left, random) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn decomposition_replays(core in core_chain(), u in 0usize..=3, word in steps()) {
        let core = Core::new(core).unwrap();
        let mut c = reduced_form(core.chain(), u).unwrap();
        prop_assert_eq!(&c, &core.reduced(u));
        prop_assert!(c.first().unwrap() >= 3 && c.last().unwrap() >= 3);
        for &t in &word {
            c = apply_tstep(&c, t).unwrap();
            let twos = (c.first() == Some(2)) as u8 + (c.last() == Some(2)) as u8;
            prop_assert_eq!(twos, 1);
        }
        let d = decompose(&c).unwrap();
        prop_assert_eq!(d.replay(), c);
        prop_assert!(d.core.is_minimal());
        prop_assert!(d.u >= u);
        prop_assert_eq!(d.steps, word);
    }

    #[test]
    fn weight_sum_bookkeeping(core in core_chain(), u in 0usize..=4, word in steps()) {
        let base = reduced_form(&core, u).unwrap();
        let k = u as i64;
        prop_assert_eq!(base.weight_sum(), (k + 1) * core.weight_sum() - 2 * k);
        let mut c = base;
        for t in word {
            let before = c.weight_sum();
            c = apply_tstep(&c, t).unwrap();
            prop_assert_eq!(c.weight_sum(), before + 1);
        }
    }

    #[test]
    fn discrepancy_invariants(f in small_fraction(300)) {
        let c = f.expand();
        let d = discrepancies(&c).unwrap();
        prop_assert!(d.in_range());
        prop_assert!(d.satisfies(&c));
        let all_zero = d.a().iter().all(|a| *a == Rational::from_integer(0.into()));
        prop_assert_eq!(all_zero, c.entries().iter().all(|&b| b == 2));
        let n = Int::from(*f.n());
        let end = |x: i64| Rational::new(Int::from(x + 1), n.clone()) - Rational::from_integer(1.into());
        prop_assert_eq!(d.first(), &end(*f.q()));
        prop_assert_eq!(d.last(), &end(f.inverse()));
        let lhs: Rational = d.a().iter().zip(c.entries())
            .map(|(a, &b)| a * Rational::from_integer(Int::from(b - 2)))
            .sum();
        let big = f.map(|x| Int::from(*x)).unwrap();
        let rhs = Rational::from_integer(Int::from(-c.weight_sum())) + correction_term(&big);
        prop_assert_eq!(lhs, rhs);
        let bridge = -Rational::from_integer(1.into()) - d.first() - d.last();
        prop_assert_eq!(bridge, Rational::from_integer(1.into()) - end_term(&big));
    }

    #[test]
    fn step_value_matches_ledger(f in small_fraction(300), ks2 in -3i64..5, m in 0i64..5) {
        prop_assume!(*f.n() > 2);
        let c = f.expand();
        let before = k2_ledger(&c, ks2, m).unwrap();
        let mut v = c.into_entries();
        v[0] += 1;
        v.push(2);
        let after = k2_ledger(&Chain::new(v), ks2, m + 1).unwrap();
        prop_assert!(before.is_consistent() && after.is_consistent());
        prop_assert_eq!(after.kw2 - before.kw2, k2_step_value(&f).unwrap());
    }

    #[test]
    fn formation_matches_expansion(f in small_fraction(200)) {
        prop_assume!(*f.n() > 2);
        let step = formation_rule(&f).unwrap();
        let b = f.expand().into_entries();
        let mut left = b.clone();
        left[0] += 1;
        left.push(2);
        let right: Vec<i64> = left.iter().rev().copied().collect();
        prop_assert_eq!(Fraction::new(step.n_big, step.q_big).unwrap().expand(), Chain::new(left));
        prop_assert_eq!(Fraction::new(step.n_big, step.qp_big).unwrap().expand(), Chain::new(right));
        prop_assert_eq!((step.q_big * step.qp_big) % step.n_big, 1);
        prop_assert_eq!(f.q() * f.inverse(), 1 + step.m * f.n());
    }

    #[test]
    fn correction_moves_with_bridge_sign(f in small_fraction(100)) {
        prop_assume!(*f.n() > 2);
        let sign = bridge_degree(&f).numer().signum();
        let mut cur = f;
        for _ in 0..10 {
            let next = formation_rule(&cur).unwrap().fraction();
            let (a, b) = (correction_term(&cur), correction_term(&next));
            prop_assert_eq!((a - b).numer().signum(), sign);
            prop_assert_eq!(bridge_degree(&next).numer().signum(), sign);
            cur = next;
        }
    }
}

#[test]
fn admissible_for_chains_agrees_with_direct_check() {
    fn rec(prefix: &mut Vec<i64>, out: &mut Vec<Chain>) {
        if !prefix.is_empty() {
            out.push(Chain::new(prefix.clone()));
        }
        if prefix.len() == 6 {
            return;
        }
        for b in 2..=6 {
            prefix.push(b);
            rec(prefix, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), &mut all);
    for c in &all {
        assert_eq!(
            is_admissible_for_chains(c),
            is_admissible_for_chains_upto(c, 5),
            "{c}"
        );
    }
}

#[test]
fn reduced_form_length_is_monotone_on_centers() {
    let centers: Vec<Chain> = enumerate_generalized_t(&Chain::from([4]), 4)
        .unwrap()
        .into_iter()
        .map(|m| m.chain)
        .chain(enumerate_cores(4, 3).into_iter().map(|(c, _)| c.chain().clone()))
        .collect();
    for c in centers {
        let mut prev = 0;
        for u in 0..8.min(MAX_INSERTIONS) {
            let len = reduced_form(&c, u).unwrap().len();
            assert!(len > prev, "{c} u={u}");
            prev = len;
        }
    }
}

#[test]
fn example_family_volumes_increase() {
    for n0 in 3..=6 {
        let seq = example210_family::<i64>(n0, 60).unwrap();
        assert!(seq.recomputes_exactly());
        let rep = limit_of(&seq, &Ratio::new(1, 1000)).unwrap();
        assert_eq!(rep.monotonicity, Monotonicity::StrictlyIncreasing, "n0={n0}");
    }
    for seed in [[5], [6], [7]] {
        let seq = blowup_family::<i64>(&Chain::from(seed), 8, 0, 0).unwrap();
        let rep = limit_of(&seq, &Ratio::new(1, 1000)).unwrap();
        assert_eq!(rep.monotonicity, Monotonicity::StrictlyIncreasing);
        assert!(seq.recomputes_exactly());
    }
}
