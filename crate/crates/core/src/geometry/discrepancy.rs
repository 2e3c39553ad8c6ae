use crate::{Chain, Error, Field, Result};

/// Solution of the tridiagonal system
/// `a_{j-1} - b_j a_j + a_{j+1} = b_j - 2` together with the forward-sweep
/// coefficients `c_j`, `d_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancies<F> {
    a: Vec<F>,
    aux_c: Vec<F>,
    aux_d: Vec<F>,
}

impl<F: Field> Discrepancies<F> {
    pub fn solve(chain: &Chain) -> Result<Self> {
        chain.require_strict()?;
        let b = chain.entries();
        let r = b.len();
        if r == 0 {
            return Err(Error::EmptyChain);
        }
        let two = F::from_entry(2);
        let mut aux_c: Vec<F> = Vec::with_capacity(r);
        let mut aux_d: Vec<F> = Vec::with_capacity(r);
        for (j, &bj) in b.iter().enumerate() {
            let bj = F::from_entry(bj);
            let rhs = bj.clone() - two.clone();
            let (den, rhs) = if j == 0 {
                (-bj, rhs)
            } else {
                (
                    -bj - aux_c[j - 1].clone(),
                    rhs - aux_d[j - 1].clone(),
                )
            };
            aux_c.push(F::one() / den.clone());
            aux_d.push(rhs / den);
        }
        let mut a = vec![F::zero(); r];
        a[r - 1] = aux_d[r - 1].clone();
        for j in (0..r - 1).rev() {
            a[j] = aux_d[j].clone() - aux_c[j].clone() * a[j + 1].clone();
        }
        Ok(Discrepancies { a, aux_c, aux_d })
    }

    pub fn a(&self) -> &[F] {
        &self.a
    }

    pub fn aux_c(&self) -> &[F] {
        &self.aux_c
    }

    pub fn aux_d(&self) -> &[F] {
        &self.aux_d
    }

    pub fn first(&self) -> &F {
        &self.a[0]
    }

    pub fn last(&self) -> &F {
        &self.a[self.a.len() - 1]
    }

    /// Whether `a` satisfies every row of the system for `chain` exactly.
    pub fn satisfies(&self, chain: &Chain) -> bool {
        let b = chain.entries();
        if b.len() != self.a.len() {
            return false;
        }
        let r = b.len();
        (0..r).all(|j| {
            let bj = F::from_entry(b[j]);
            let mut lhs = -(bj.clone() * self.a[j].clone());
            if j > 0 {
                lhs = lhs + self.a[j - 1].clone();
            }
            if j + 1 < r {
                lhs = lhs + self.a[j + 1].clone();
            }
            lhs == bj - F::from_entry(2)
        })
    }

    /// `-1 < a_j <= 0` for every `j`.
    pub fn in_range(&self) -> bool {
        let minus_one = -F::one();
        self.a.iter().all(|x| *x > minus_one && *x <= F::zero())
    }
}

/// Exact discrepancies of a strict chain.
pub fn discrepancies(chain: &Chain) -> Result<Discrepancies<crate::Rational>> {
    Discrepancies::solve(chain)
}
