use crate::error::{Error, Result};

use super::evidence::{Evidence, Finding};
use super::VarId;

/// A non-negative table over an ordered scope of discrete variables.
///
/// Entries are stored row-major over the scope with the last variable varying fastest.
/// A factor with an empty scope is a scalar holding one entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<VarId>,
    cards: Vec<usize>,
    table: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<VarId>, cards: Vec<usize>, table: Vec<f64>) -> Result<Self> {
        if scope.len() != cards.len() {
            return Err(Error::TableSize {
                expected: scope.len(),
                actual: cards.len(),
            });
        }
        for (i, v) in scope.iter().enumerate() {
            if scope[..i].contains(v) {
                return Err(Error::RepeatedScope(*v));
            }
            if cards[i] == 0 {
                return Err(Error::NoStates(*v));
            }
        }
        let expected: usize = cards.iter().product();
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
                actual: table.len(),
            });
        }
        if let Some((index, &value)) = table
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidEntry { index, value });
        }
        Ok(Factor {
            scope,
            cards,
            table,
        })
    }

    /// The multiplicative identity: an empty scope holding 1.
    pub fn unit() -> Self {
        Factor::scalar(1.0)
    }

    pub fn scalar(value: f64) -> Self {
        Factor {
            scope: Vec::new(),
            cards: Vec::new(),
            table: vec![value],
        }
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn into_table(self) -> Vec<f64> {
        self.table
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.scope.contains(&var)
    }

    pub fn cardinality_of(&self, var: VarId) -> Option<usize> {
        self.position(var).map(|i| self.cards[i])
    }

    pub fn total(&self) -> f64 {
        self.table.iter().sum()
    }

    fn position(&self, var: VarId) -> Option<usize> {
        self.scope.iter().position(|&v| v == var)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.cards.len()];
        for i in (0..self.cards.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.cards[i + 1];
        }
        strides
    }

    /// Entry for a full assignment given in scope order.
    pub fn value(&self, assignment: &[usize]) -> f64 {
        debug_assert_eq!(assignment.len(), self.scope.len());
        let idx = assignment
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (&s, &c)| acc * c + s);
        self.table[idx]
    }

    /// Pointwise product over the union of both scopes.
    ///
    /// The result scope is `self`'s scope followed by the variables only `other` mentions.
    pub fn multiply(&self, other: &Factor) -> Result<Factor> {
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        for (&v, &c) in other.scope.iter().zip(&other.cards) {
            match self.cardinality_of(v) {
                Some(mine) if mine != c => {
                    return Err(Error::CardinalityMismatch {
                        var: v,
                        left: mine,
                        right: c,
                    })
                }
                Some(_) => {}
                None => {
                    scope.push(v);
                    cards.push(c);
                }
            }
        }

        let left = stride_map(&scope, self);
        let right = stride_map(&scope, other);
        let size: usize = cards.iter().product();
        let mut table = Vec::with_capacity(size);
        let mut counter = vec![0usize; scope.len()];
        let (mut li, mut ri) = (0usize, 0usize);
        for _ in 0..size {
            table.push(self.table[li] * other.table[ri]);
            // odometer increment, last variable fastest
            for d in (0..scope.len()).rev() {
                counter[d] += 1;
                li += left[d];
                ri += right[d];
                if counter[d] < cards[d] {
                    break;
                }
                li -= left[d] * cards[d];
                ri -= right[d] * cards[d];
                counter[d] = 0;
            }
        }
        Ok(Factor {
            scope,
            cards,
            table,
        })
    }

    /// Marginalizes `var` out of the factor.
    pub fn sum_out(&self, var: VarId) -> Result<Factor> {
        let pos = self.position(var).ok_or(Error::NotInScope(var))?;
        let card = self.cards[pos];
        let inner: usize = self.cards[pos + 1..].iter().product();
        let outer: usize = self.cards[..pos].iter().product();
        let mut table = vec![0.0; outer * inner];
        for o in 0..outer {
            for s in 0..card {
                let base = (o * card + s) * inner;
                for i in 0..inner {
                    table[o * inner + i] += self.table[base + i];
                }
            }
        }
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        Ok(Factor {
            scope,
            cards,
            table,
        })
    }

    /// Slices the factor at `var = state`, dropping `var` from the scope.
    pub fn restrict(&self, var: VarId, state: usize) -> Result<Factor> {
        let pos = self.position(var).ok_or(Error::NotInScope(var))?;
        let card = self.cards[pos];
        if state >= card {
            return Err(Error::StateOutOfRange {
                var,
                index: state,
                cardinality: card,
            });
        }
        let inner: usize = self.cards[pos + 1..].iter().product();
        let outer: usize = self.cards[..pos].iter().product();
        let mut table = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = (o * card + state) * inner;
            table.extend_from_slice(&self.table[base..base + inner]);
        }
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        Ok(Factor {
            scope,
            cards,
            table,
        })
    }

    /// Scales entries by a likelihood over `var`'s states; `var` stays in scope.
    pub fn weight(&self, var: VarId, likelihood: &[f64]) -> Result<Factor> {
        let pos = self.position(var).ok_or(Error::NotInScope(var))?;
        let card = self.cards[pos];
        Finding::check_virtual(var, likelihood, card)?;
        let inner: usize = self.cards[pos + 1..].iter().product();
        let mut out = self.clone();
        for (i, v) in out.table.iter_mut().enumerate() {
            *v *= likelihood[(i / inner) % card];
        }
        Ok(out)
    }

    /// Applies every finding whose variable is in scope.
    pub fn reduce(&self, evidence: &Evidence) -> Result<Factor> {
        let mut out = self.clone();
        for (&var, finding) in evidence.iter() {
            if !out.contains(var) {
                continue;
            }
            out = match finding {
                Finding::Hard(state) => out.restrict(var, *state)?,
                Finding::Virtual(lik) => out.weight(var, lik)?,
            };
        }
        Ok(out)
    }

    /// Rescales entries to sum to one.
    ///
    /// Fails with [`Error::ImpossibleEvidence`] when every entry is zero.
    pub fn normalize(&self) -> Result<Factor> {
        let total = self.total();
        if total == 0.0 {
            return Err(Error::ImpossibleEvidence);
        }
        let mut out = self.clone();
        out.table.iter_mut().for_each(|v| *v /= total);
        Ok(out)
    }

    /// Reorders the scope, permuting the table to match.
    pub fn permute(&self, order: &[VarId]) -> Result<Factor> {
        if order.len() != self.scope.len() {
            return Err(Error::InvalidOrder(format!(
                "permutation has {} variables, factor has {}",
                order.len(),
                self.scope.len()
            )));
        }
        let mut cards = Vec::with_capacity(order.len());
        for &v in order {
            cards.push(self.cardinality_of(v).ok_or(Error::NotInScope(v))?);
        }
        let target = Factor::new(order.to_vec(), cards, vec![1.0; self.table.len()])?;
        let mut out = target.multiply(self)?;
        out.scope.truncate(order.len());
        out.cards.truncate(order.len());
        Ok(out)
    }
}

/// For each variable of `scope`, the stride it has in `f` (0 when absent).
fn stride_map(scope: &[VarId], f: &Factor) -> Vec<usize> {
    let strides = f.strides();
    scope
        .iter()
        .map(|&v| f.position(v).map_or(0, |p| strides[p]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: VarId = VarId::aux(0);
    const B: VarId = VarId::aux(1);
    const C: VarId = VarId::aux(2);

    fn f(scope: &[VarId], cards: &[usize], table: &[f64]) -> Factor {
        Factor::new(scope.to_vec(), cards.to_vec(), table.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn multiply_examples() {
        let p = f(&[A], &[2], &[0.5, 0.5])
            .multiply(&f(&[A], &[2], &[1.0, 0.0]))
            .unwrap();
        assert_eq!(p.table(), &[0.5, 0.0]);

        let p = f(&[A], &[2], &[0.3, 0.7])
            .multiply(&Factor::unit())
            .unwrap();
        assert_eq!(p.scope(), &[A]);
        assert_eq!(p.table(), &[0.3, 0.7]);

        let p = f(&[A], &[2], &[0.9, 0.1])
            .multiply(&f(&[B], &[2], &[0.2, 0.8]))
            .unwrap();
        assert_eq!(p.scope(), &[A, B]);
        assert!(close(p.table(), &[0.18, 0.72, 0.02, 0.08]));
    }

    #[test]
    fn multiply_rejects_cardinality_mismatch() {
        let err = f(&[A], &[2], &[1.0, 1.0])
            .multiply(&f(&[A], &[3], &[1.0; 3]))
            .unwrap_err();
        assert!(matches!(err, Error::CardinalityMismatch { .. }));
    }

    #[test]
    fn sum_out_examples() {
        let ab = f(&[A, B], &[2, 2], &[0.1, 0.2, 0.3, 0.4]);
        let a = ab.sum_out(B).unwrap();
        assert!(close(a.table(), &[0.3, 0.7]));

        let s = f(&[A], &[2], &[0.4, 0.6]).sum_out(A).unwrap();
        assert!(s.scope().is_empty());
        assert!((s.table()[0] - 1.0).abs() < 1e-15);

        let both = ab.sum_out(A).unwrap().sum_out(B).unwrap();
        assert!((both.table()[0] - 1.0).abs() < 1e-15);

        assert_eq!(ab.sum_out(C).unwrap_err(), Error::NotInScope(C));
    }

    #[test]
    fn reduce_examples() {
        let fa = f(&[A], &[2], &[0.25, 0.75]);
        let mut e = Evidence::new();
        e.set_hard(A, 0);
        let r = fa.reduce(&e).unwrap();
        assert!(r.scope().is_empty());
        assert_eq!(r.table(), &[0.25]);

        let mut e = Evidence::new();
        e.set_virtual(A, vec![1.0, 1.0]);
        assert_eq!(fa.reduce(&e).unwrap(), fa);

        let mut e = Evidence::new();
        e.set_virtual(A, vec![0.99, 0.005]);
        let r = f(&[A], &[2], &[0.5, 0.5]).reduce(&e).unwrap();
        assert!(close(r.table(), &[0.495, 0.0025]));
    }

    #[test]
    fn reduce_rejects_bad_findings() {
        let fa = f(&[A], &[2], &[0.25, 0.75]);
        let mut e = Evidence::new();
        e.set_hard(A, 5);
        assert!(matches!(fa.reduce(&e), Err(Error::StateOutOfRange { .. })));
        let mut e = Evidence::new();
        e.set_virtual(A, vec![1.0]);
        assert!(matches!(fa.reduce(&e), Err(Error::MalformedVirtual { .. })));
        let mut e = Evidence::new();
        e.set_virtual(A, vec![0.0, 0.0]);
        assert!(matches!(fa.reduce(&e), Err(Error::MalformedVirtual { .. })));
    }

    #[test]
    fn normalize_examples() {
        let n = f(&[A], &[2], &[0.2, 0.2]).normalize().unwrap();
        assert_eq!(n.table(), &[0.5, 0.5]);
        assert_eq!(
            f(&[A], &[2], &[0.0, 0.0]).normalize().unwrap_err(),
            Error::ImpossibleEvidence
        );
        assert_eq!(Factor::scalar(3.0).normalize().unwrap().table(), &[1.0]);
    }

    #[test]
    fn construction_validates() {
        assert!(Factor::new(vec![A], vec![2], vec![1.0]).is_err());
        assert!(Factor::new(vec![A], vec![2], vec![1.0, -0.1]).is_err());
        assert!(Factor::new(vec![A], vec![2], vec![1.0, f64::NAN]).is_err());
        assert!(Factor::new(vec![A, A], vec![2, 2], vec![1.0; 4]).is_err());
    }

    #[test]
    fn permute_moves_axes() {
        let ab = f(&[A, B], &[2, 3], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let ba = ab.permute(&[B, A]).unwrap();
        assert_eq!(ba.scope(), &[B, A]);
        assert_eq!(ba.table(), &[1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
    }

    fn arb_factor(vars: Vec<(VarId, usize)>) -> impl Strategy<Value = Factor> {
        let size: usize = vars.iter().map(|v| v.1).product();
        proptest::collection::vec(0.0f64..1.0, size).prop_map(move |t| {
            let (s, c): (Vec<_>, Vec<_>) = vars.iter().cloned().unzip();
            Factor::new(s, c, t).unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiply_commutes_up_to_permutation(
            x in arb_factor(vec![(A, 2), (B, 3)]),
            y in arb_factor(vec![(C, 2), (A, 2)]),
        ) {
            let xy = x.multiply(&y).unwrap();
            let yx = y.multiply(&x).unwrap().permute(xy.scope()).unwrap();
            prop_assert!(close(xy.table(), yx.table()));
        }

        #[test]
        fn sum_out_order_independent(x in arb_factor(vec![(A, 2), (B, 3), (C, 2)])) {
            let ab = x.sum_out(A).unwrap().sum_out(B).unwrap();
            let ba = x.sum_out(B).unwrap().sum_out(A).unwrap();
            prop_assert!(ab.table().iter().zip(ba.table()).all(|(p, q)| (p - q).abs() < 1e-12));
            let total = ab.sum_out(C).unwrap().table()[0];
            prop_assert!((total - x.total()).abs() < 1e-12);
        }
    }
}
