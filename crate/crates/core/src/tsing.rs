//! Cores, the T-chain algorithm and generalized T-singularities.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::contraction::{concat_with_ones, contract_in_place, is_admissible_for_chains, leftmost_one};
use crate::chain::first_inadmissible;
use crate::{Chain, Error, Fraction, Result, Scalar};

/// Largest insertion count tried when matching reduced forms of a center.
pub const MAX_INSERTIONS: usize = 64;

/// Both ends `>= 3`, or a single entry `>= 4`.
pub fn is_core(c: &Chain) -> bool {
    let e = c.entries();
    if !c.is_strict() {
        return false;
    }
    match e {
        [] => false,
        [x] => *x >= 4,
        [x, .., y] => *x >= 3 && *y >= 3,
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Core(Chain);

impl Core {
    pub fn new(c: Chain) -> Result<Self> {
        if is_core(&c) {
            Ok(Core(c))
        } else {
            Err(Error::NotACore(c.to_string()))
        }
    }

    pub fn chain(&self) -> &Chain {
        &self.0
    }

    pub fn entries(&self) -> &[i64] {
        self.0.entries()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_minimal(&self) -> bool {
        is_minimal_core(self)
    }

    /// Reduced form with `u` insertions, written down directly. Agrees with
    /// [`reduced_form`], which goes through contraction.
    pub fn reduced(&self, u: usize) -> Chain {
        let e = self.entries();
        let s = e.len();
        if u == 0 {
            return self.0.clone();
        }
        let mut v = Vec::with_capacity(s * (u + 1));
        if s == 1 {
            v.push(e[0] - 1);
            v.extend(std::iter::repeat_n(e[0] - 2, u - 1));
            v.push(e[0] - 1);
            return Chain::new(v);
        }
        for k in 0..=u {
            let start = v.len();
            v.extend_from_slice(e);
            if k > 0 {
                v[start] -= 1;
            }
            if k < u {
                v[start + s - 1] -= 1;
            }
        }
        Chain::new(v)
    }
}

impl fmt::Display for Core {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Core {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TStep {
    Left,
    Right,
}

impl TStep {
    pub fn letter(self) -> char {
        match self {
            TStep::Left => 'L',
            TStep::Right => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'L' | 'l' => Some(TStep::Left),
            'R' | 'r' => Some(TStep::Right),
            _ => None,
        }
    }
}

/// `Left: [a..] -> [2, a_1, .., a_s + 1]`, `Right: [a..] -> [a_1 + 1, .., a_s, 2]`.
pub fn apply_tstep(c: &Chain, t: TStep) -> Result<Chain> {
    c.require_strict()?;
    if c.is_empty() {
        return Err(Error::EmptyChain);
    }
    let mut v = Vec::with_capacity(c.len() + 1);
    match t {
        TStep::Left => {
            v.push(2);
            v.extend_from_slice(c.entries());
            *v.last_mut().unwrap() += 1;
        }
        TStep::Right => {
            v.extend_from_slice(c.entries());
            v[0] += 1;
            v.push(2);
        }
    }
    Ok(Chain::new(v))
}

/// Result of trying to undo one T-step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Undo {
    /// The predecessor and the step that produced the input from it.
    Step(Chain, TStep),
    /// No end equals 2 (or a single entry): nothing to undo.
    Terminal,
    /// Both ends equal 2; no T-chain produces this.
    NotGeneralizedT,
}

pub fn undo_tstep(c: &Chain) -> Result<Undo> {
    c.require_strict()?;
    let e = c.entries();
    if e.len() < 2 {
        return Ok(Undo::Terminal);
    }
    let (first, last) = (e[0], e[e.len() - 1]);
    let (mut v, step) = match (first == 2, last == 2) {
        (true, true) => return Ok(Undo::NotGeneralizedT),
        (false, false) => return Ok(Undo::Terminal),
        (true, false) => (e[1..].to_vec(), TStep::Left),
        (false, true) => (e[..e.len() - 1].to_vec(), TStep::Right),
    };
    let end = match step {
        TStep::Left => v.len() - 1,
        TStep::Right => 0,
    };
    v[end] -= 1;
    if v[end] < 2 {
        return Err(Error::MalformedChain(c.to_string()));
    }
    Ok(Undo::Step(Chain::new(v), step))
}

/// Undoes T-steps until none applies. Returns the base, the steps in
/// application order, and whether the walk ended on a both-ends-2 chain.
fn walk_back(c: &Chain) -> Result<(Chain, Vec<TStep>, bool)> {
    let mut cur = c.clone();
    let mut steps = Vec::new();
    loop {
        match undo_tstep(&cur)? {
            Undo::Step(prev, t) => {
                steps.push(t);
                cur = prev;
            }
            Undo::Terminal => break,
            Undo::NotGeneralizedT => {
                steps.reverse();
                return Ok((cur, steps, true));
            }
        }
    }
    steps.reverse();
    Ok((cur, steps, false))
}

/// `contract_fully(concat_with_ones(base, u))`, required to be nonempty and strict.
pub fn reduced_form(base: &Chain, u: usize) -> Result<Chain> {
    base.require_strict()?;
    let cat = concat_with_ones(base, u);
    if let Some(index) = first_inadmissible(cat.entries()) {
        let conv = cat.convergents::<crate::Int>();
        return Err(Error::NotAdmissible {
            index,
            value: conv.p(index).to_string(),
        });
    }
    let s = cat.len();
    let mut buf = cat.entries().to_vec();
    let ok = contract_in_place(&mut buf, leftmost_one).is_ok();
    if !ok || buf.is_empty() || buf.iter().any(|&b| b < 2) {
        let conv = cat.convergents::<crate::Int>();
        return Err(Error::NotAdmissible {
            index: s,
            value: conv.p(s).to_string(),
        });
    }
    Ok(Chain::new(buf))
}

/// Witness that a chain is `reduced_form(core, u)` followed by `steps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub core: Core,
    pub u: usize,
    pub steps: Vec<TStep>,
}

impl Decomposition {
    pub fn steps_word(&self) -> String {
        self.steps.iter().map(|t| t.letter()).collect()
    }

    pub fn replay(&self) -> Chain {
        let mut c = self.core.reduced(self.u);
        for &t in &self.steps {
            c = apply_tstep(&c, t).expect("reduced form of a core is strict");
        }
        c
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "core={} u={} steps={}", self.core, self.u, self.steps_word())
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Decomposition", 3)?;
        st.serialize_field("core", &self.core)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("steps", &self.steps_word())?;
        st.end()
    }
}

/// Minimal core, maximal `u` and the T-step word producing `c`, or `None`
/// when `c` is not admissible for chains.
pub fn decompose(c: &Chain) -> Option<Decomposition> {
    if c.is_empty() || !c.is_strict() {
        return None;
    }
    let (base, steps, dead) = walk_back(c).ok()?;
    if dead || !is_core(&base) {
        return None;
    }
    let e = base.entries();
    let len = e.len();
    for s in 1..=len {
        if len % s != 0 {
            continue;
        }
        let u = len / s - 1;
        let cand = if u == 0 {
            e.to_vec()
        } else if s == 1 {
            vec![e[0] + 1]
        } else {
            let mut v = e[..s].to_vec();
            v[s - 1] += 1;
            v
        };
        let Ok(core) = Core::new(Chain::new(cand)) else {
            continue;
        };
        if core.reduced(u) == base {
            return Some(Decomposition { core, u, steps });
        }
    }
    unreachable!("u = 0 always matches a core base")
}

/// A core is minimal unless it is the reduced form of a shorter core.
pub fn is_minimal_core(c: &Core) -> bool {
    let e = c.entries();
    let s = e.len();
    if s == 1 {
        return true;
    }
    // 1-indexed access
    let at = |i: usize| e[i - 1];
    // a single repeated entry: [x, x-1, ..., x-1, x]
    let single = at(1) == at(s) && (2..s).all(|i| at(i) == at(1) - 1);
    if single {
        return false;
    }
    for k in 2..s {
        if !s.is_multiple_of(k) {
            continue;
        }
        let r = s / k;
        let repeats = (1..k).all(|j| {
            (2..r).all(|i| at(i) == at(i + j * r))
                && at(1 + j * r) == at(1) - 1
                && at(j * r) == at(s) - 1
        });
        if repeats {
            return false;
        }
    }
    true
}

/// `(d, n0, a)` with `n = d n0^2` and `q = d n0 a - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TSingularity<I> {
    pub d: I,
    pub n0: I,
    pub a: I,
}

pub fn recognize_t<I: Scalar>(f: &Fraction<I>) -> Option<TSingularity<I>> {
    let n = f.n().clone();
    let q1 = f.q().clone() + I::one();
    let g = n.gcd(&q1);
    let n0 = n.clone() / g.clone();
    if n0 < I::from_entry(2) || !(g.clone() % n0.clone()).is_zero() {
        return None;
    }
    let d = g.clone() / n0.clone();
    let a = q1 / (d.clone() * n0.clone());
    if a.is_positive() && a < n0 && n0.gcd(&a).is_one() {
        Some(TSingularity { d, n0, a })
    } else {
        None
    }
}

/// Reduced forms of a center, precomputed up to a length bound.
#[derive(Clone, Debug)]
pub struct GeneralizedTFamily {
    center: Chain,
    reduced: Vec<Chain>,
    max_length: usize,
}

impl GeneralizedTFamily {
    pub fn new(center: &Chain, max_length: usize) -> Result<Self> {
        if !is_admissible_for_chains(center) {
            return Err(Error::InvalidCenter(center.to_string()));
        }
        let mut reduced = Vec::new();
        for u in 0..=MAX_INSERTIONS {
            let r = reduced_form(center, u)?;
            if r.len() > max_length {
                break;
            }
            reduced.push(r);
        }
        Ok(GeneralizedTFamily {
            center: center.clone(),
            reduced,
            max_length,
        })
    }

    pub fn center(&self) -> &Chain {
        &self.center
    }

    /// Reduced forms indexed by `u`.
    pub fn reduced_forms(&self) -> &[Chain] {
        &self.reduced
    }

    /// Insertion count and steps if `c` belongs to the family. `c` must not
    /// exceed the length bound the family was built for.
    pub fn witness(&self, c: &Chain) -> Option<(usize, Vec<TStep>)> {
        debug_assert!(c.len() <= self.max_length);
        let mut cur = c.clone();
        let mut steps = Vec::new();
        loop {
            if let Some(u) = self.reduced.iter().position(|r| *r == cur) {
                steps.reverse();
                return Some((u, steps));
            }
            match undo_tstep(&cur) {
                Ok(Undo::Step(prev, t)) => {
                    steps.push(t);
                    cur = prev;
                }
                _ => return None,
            }
        }
    }

    pub fn contains(&self, c: &Chain) -> bool {
        self.witness(c).is_some()
    }

    /// All members with length up to the bound, in lexicographic order.
    pub fn members(&self) -> Vec<FamilyMember> {
        let mut out: BTreeMap<Chain, FamilyMember> = BTreeMap::new();
        for (u, r) in self.reduced.iter().enumerate() {
            let mut layer = vec![(r.clone(), Vec::<TStep>::new())];
            while !layer.is_empty() {
                let mut next = Vec::new();
                for (c, steps) in layer {
                    if c.len() < self.max_length {
                        for t in [TStep::Left, TStep::Right] {
                            let mut s = steps.clone();
                            s.push(t);
                            next.push((apply_tstep(&c, t).expect("strict"), s));
                        }
                    }
                    out.entry(c.clone()).or_insert(FamilyMember { chain: c, u, steps });
                }
                layer = next;
            }
        }
        out.into_values().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub chain: Chain,
    pub u: usize,
    pub steps: Vec<TStep>,
}

impl FamilyMember {
    pub fn steps_word(&self) -> String {
        self.steps.iter().map(|t| t.letter()).collect()
    }
}

impl Serialize for FamilyMember {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FamilyMember", 3)?;
        st.serialize_field("chain", &self.chain)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("steps", &self.steps_word())?;
        st.end()
    }
}

/// Whether `c` is reached by T-steps from some reduced form of `center`.
pub fn is_generalized_t(c: &Chain, center: &Chain) -> Result<bool> {
    c.require_strict()?;
    let fam = GeneralizedTFamily::new(center, c.len())?;
    Ok(fam.contains(c))
}

pub fn enumerate_generalized_t(center: &Chain, max_length: usize) -> Result<Vec<FamilyMember>> {
    Ok(GeneralizedTFamily::new(center, max_length)?.members())
}

/// Cores with `sum (e - 2) <= max_weight_sum` and length `<= max_length`,
/// lexicographic, each paired with its minimality.
pub fn enumerate_cores(max_weight_sum: i64, max_length: usize) -> Vec<(Core, bool)> {
    fn rec(prefix: &mut Vec<i64>, budget: i64, max_length: usize, out: &mut Vec<Chain>) {
        let c = Chain::new(prefix.clone());
        if is_core(&c) {
            out.push(c);
        }
        if prefix.len() == max_length {
            return;
        }
        for b in 2..=2 + budget {
            if prefix.is_empty() && b < 3 {
                continue;
            }
            prefix.push(b);
            rec(prefix, budget - (b - 2), max_length, out);
            prefix.pop();
        }
    }
    let mut found = Vec::new();
    if max_weight_sum >= 0 {
        rec(&mut Vec::new(), max_weight_sum, max_length, &mut found);
    }
    found.sort();
    found
        .into_iter()
        .map(|c| {
            let core = Core(c);
            let m = is_minimal_core(&core);
            (core, m)
        })
        .collect()
}
