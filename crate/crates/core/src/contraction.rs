//! Blow-down of `(-1)`-entries on chains in general form.
//!
//! Contracting an entry equal to 1 removes it and lowers each neighbour by
//! one. The singleton `[0]` and the empty chain are accepted as terminal
//! states; any other entry `<= 0` is a [`Error::NegativeWeight`].

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::chain::first_inadmissible;
use crate::tsing::{undo_tstep, Undo};
use crate::{tsing, Chain, Error, Result};

/// One blow-down: the index contracted and the chain on either side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    pub index: usize,
    pub before: Chain,
    pub after: Chain,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ContractionTrace {
    steps: Vec<ContractionStep>,
}

impl ContractionTrace {
    pub fn steps(&self) -> &[ContractionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One line per step: `step k: contract index i: [before] -> [after]`.
    pub fn to_log(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ContractionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "step {}: contract index {}: {} -> {}",
                k + 1,
                s.index,
                s.before,
                s.after
            )?;
        }
        Ok(())
    }
}

/// Checks a contraction at `i` without touching `buf`.
fn check_contraction(buf: &[i64], i: usize) -> Result<()> {
    let len = buf.len();
    if i >= len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    if buf[i] != 1 {
        return Err(Error::NotAContractibleEntry {
            index: i,
            value: buf[i],
        });
    }
    if len > 2 {
        if i > 0 && buf[i - 1] <= 1 {
            return Err(Error::NegativeWeight { index: i - 1 });
        }
        if i + 1 < len && buf[i + 1] <= 1 {
            return Err(Error::NegativeWeight { index: i });
        }
    }
    Ok(())
}

/// Contracts `buf[i]` in place. On error `buf` is left unchanged.
pub fn contract_at(buf: &mut Vec<i64>, i: usize) -> Result<()> {
    check_contraction(buf, i)?;
    buf.remove(i);
    if i > 0 {
        buf[i - 1] -= 1;
    }
    if i < buf.len() {
        buf[i] -= 1;
    }
    Ok(())
}

/// Index of the leftmost entry equal to 1.
pub fn leftmost_one(buf: &[i64]) -> Option<usize> {
    buf.iter().position(|&b| b == 1)
}

/// Index of the rightmost entry equal to 1.
pub fn rightmost_one(buf: &[i64]) -> Option<usize> {
    buf.iter().rposition(|&b| b == 1)
}

/// Contracts until `pick` returns `None`. `pick` must return indices of
/// entries equal to 1. No allocation beyond what `buf` already holds.
pub fn contract_in_place(
    buf: &mut Vec<i64>,
    mut pick: impl FnMut(&[i64]) -> Option<usize>,
) -> Result<()> {
    while let Some(i) = pick(buf) {
        contract_at(buf, i)?;
    }
    Ok(())
}

/// Single blow-down of `c[i]`.
pub fn contract_once(c: &Chain, i: usize) -> Result<Chain> {
    c.require_general()?;
    let mut buf = c.entries().to_vec();
    contract_at(&mut buf, i)?;
    Ok(Chain::new(buf))
}

/// Contracts the leftmost 1 until none remains.
pub fn contract_fully(c: &Chain) -> Result<(Chain, ContractionTrace)> {
    contract_fully_by(c, leftmost_one)
}

/// [`contract_fully`] with a caller-chosen contraction order.
pub fn contract_fully_by(
    c: &Chain,
    mut pick: impl FnMut(&[i64]) -> Option<usize>,
) -> Result<(Chain, ContractionTrace)> {
    c.require_general()?;
    let mut buf = c.entries().to_vec();
    let mut trace = ContractionTrace::default();
    while let Some(i) = pick(&buf) {
        let before = Chain::new(buf.clone());
        contract_at(&mut buf, i)?;
        trace.steps.push(ContractionStep {
            index: i,
            before,
            after: Chain::new(buf.clone()),
        });
    }
    Ok((Chain::new(buf), trace))
}

/// `u` copies of 1 inserted between `u + 1` copies of a strict base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionPattern {
    pub base: Chain,
    pub u: usize,
}

impl InsertionPattern {
    pub fn new(base: Chain, u: usize) -> Result<Self> {
        base.require_strict()?;
        Ok(InsertionPattern { base, u })
    }

    pub fn to_chain(&self) -> Chain {
        concat_with_ones(&self.base, self.u)
    }
}

/// `[b, 1, b, 1, ..., 1, b]` with `u` ones.
pub fn concat_with_ones(base: &Chain, u: usize) -> Chain {
    let r = base.len();
    let mut v = Vec::with_capacity((u + 1) * r + u);
    for k in 0..=u {
        if k > 0 {
            v.push(1);
        }
        v.extend_from_slice(base.entries());
    }
    Chain::new(v)
}

pub fn is_admissible(c: &Chain) -> bool {
    c.is_admissible()
}

/// Decided by walking T-steps back to a base and testing whether it is a core.
pub fn is_admissible_for_chains(c: &Chain) -> bool {
    if c.is_empty() || !c.is_strict() {
        return false;
    }
    let mut cur = c.clone();
    loop {
        match undo_tstep(&cur) {
            Ok(Undo::Step(prev, _)) => cur = prev,
            Ok(Undo::Terminal) => return tsing::is_core(&cur),
            Ok(Undo::NotGeneralizedT) | Err(_) => return false,
        }
    }
}

/// Direct check: `concat_with_ones(c, u)` is admissible for every `u <= u_max`.
pub fn is_admissible_for_chains_upto(c: &Chain, u_max: usize) -> bool {
    (0..=u_max).all(|u| first_inadmissible(concat_with_ones(c, u).entries()).is_none())
}

/// Where the middle copy of `[c, 1, c, 1, c]` ends up after full contraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivingCenter {
    /// Positions within the middle copy that are never contracted.
    pub middle: Range<usize>,
    /// Positions those entries occupy in the contracted chain.
    pub result: Range<usize>,
    pub contracted: Chain,
}

pub fn surviving_center(c: &Chain) -> Result<SurvivingCenter> {
    c.require_strict()?;
    if c.is_empty() {
        return Err(Error::EmptyChain);
    }
    let fail = || Error::NotAdmissibleForChains(c.to_string());
    let r = c.len();
    let mut buf = concat_with_ones(c, 2).into_entries();
    // origin[j] = position in the concatenation of buf[j]
    let mut origin: Vec<usize> = (0..buf.len()).collect();
    while let Some(i) = leftmost_one(&buf) {
        contract_at(&mut buf, i).map_err(|_| fail())?;
        origin.remove(i);
    }
    let mid = (r + 1)..(2 * r + 1);
    let hits: Vec<usize> = (0..origin.len())
        .filter(|&j| mid.contains(&origin[j]))
        .collect();
    let (Some(&lo), Some(&hi)) = (hits.first(), hits.last()) else {
        return Err(fail());
    };
    if buf.iter().any(|&b| b < 2) {
        return Err(fail());
    }
    Ok(SurvivingCenter {
        middle: (origin[lo] - mid.start)..(origin[hi] - mid.start + 1),
        result: lo..hi + 1,
        contracted: Chain::new(buf),
    })
}
