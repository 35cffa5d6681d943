//! Integer polynomials in two noncommuting idempotents `p`, `q`.
//!
//! A monomial is reduced when it contains no `pp` or `qq` factor, so the
//! reduced words are exactly `1` and the alternating words `pqpq…`,
//! `qpqp…`. The rewriting `pp → p`, `qq → q` only shortens words and its
//! overlaps (`ppp`, `qqq`) resolve trivially, so every word has a unique
//! reduced form regardless of rewrite order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    P,
    Q,
}

impl Gen {
    pub fn symbol(self) -> char {
        match self {
            Gen::P => 'p',
            Gen::Q => 'q',
        }
    }
}

/// A monomial in `p`, `q`. Ordered length-lexicographically with `p < q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: Gen) -> Self {
        Word(vec![g])
    }

    /// Reduces an arbitrary letter sequence with the leftmost-first strategy.
    pub fn reduced(letters: Vec<Gen>) -> Self {
        let mut out: Vec<Gen> = Vec::with_capacity(letters.len());
        for g in letters {
            if out.last() != Some(&g) {
                out.push(g);
            }
        }
        Word(out)
    }

    /// Reduces by applying one rewrite at a time, at the redex position picked
    /// by `choose` from the list of all current redex positions.
    pub fn reduced_with(mut letters: Vec<Gen>, mut choose: impl FnMut(&[usize]) -> usize) -> Self {
        loop {
            let redexes: Vec<usize> = (0..letters.len().saturating_sub(1))
                .filter(|&i| letters[i] == letters[i + 1])
                .collect();
            if redexes.is_empty() {
                return Word(letters);
            }
            let pick = redexes[choose(&redexes) % redexes.len()];
            letters.remove(pick);
        }
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Product of two reduced words; only the junction can need rewriting.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        let skip = usize::from(!letters.is_empty() && letters.last() == other.0.first());
        letters.extend_from_slice(&other.0[skip..]);
        Word(letters)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "{}", g.symbol())?;
        }
        Ok(())
    }
}

/// Finite integer combination of reduced words, zero coefficients absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, BigInt>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(Word::one(), BigInt::from(c))
    }

    pub fn gen(g: Gen) -> Self {
        Self::monomial(Word::single(g), BigInt::one())
    }

    pub fn monomial(w: Word, c: BigInt) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(Word::reduced(w.0), c);
        p
    }

    /// Builds a polynomial from unreduced terms, reducing each word with the
    /// given redex chooser.
    pub fn from_raw_with<'a>(
        raw: impl IntoIterator<Item = (&'a Vec<Gen>, &'a BigInt)>,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> Self {
        let mut p = NCPoly::zero();
        for (letters, c) in raw {
            p.add_term(Word::reduced_with(letters.clone(), &mut choose), c.clone());
        }
        p
    }

    fn add_term(&mut self, w: Word, c: BigInt) {
        debug_assert!(w.is_reduced());
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.mul(wb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        (0..e).fold(NCPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &NCPoly) -> NCPoly {
        self.mul(other).sub(&other.mul(self))
    }

    /// Image under the evaluation homomorphism `p ↦ P`, `q ↦ Q`.
    pub fn evaluate<T: Scalar>(&self, p: &Matrix<T>, q: &Matrix<T>) -> Matrix<T> {
        let n = p.rows();
        let mut out = Matrix::zeros(n, n);
        for (w, c) in &self.terms {
            let mono = w.0.iter().fold(Matrix::identity(n), |acc, g| match g {
                Gen::P => &acc * p,
                Gen::Q => &acc * q,
            });
            out = &out + &mono.scale(&bigint_to_scalar::<T>(c));
        }
        out
    }
}

fn bigint_to_scalar<T: Scalar>(c: &BigInt) -> T {
    if let Ok(v) = i64::try_from(c) {
        return T::from_i64(v);
    }
    let ten = T::from_i64(10);
    let mag = c.abs().to_string().bytes().fold(T::zero(), |acc, d| {
        acc * ten.clone() + T::from_i64(i64::from(d - b'0'))
    });
    if c.is_negative() {
        -mag
    } else {
        mag
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p() -> NCPoly {
        NCPoly::gen(Gen::P)
    }

    fn q() -> NCPoly {
        NCPoly::gen(Gen::Q)
    }

    #[test]
    fn idempotent_generators() {
        assert_eq!(p().mul(&p()), p());
        assert_eq!(q().pow(5), q());
    }

    #[test]
    fn m_squared_classical_form() {
        let m = p().sub(&q());
        let expected = p().add(&q()).sub(&p().mul(&q())).sub(&q().mul(&p()));
        assert_eq!(m.mul(&m), expected);
    }

    #[test]
    fn word_order_is_length_lex() {
        let mut ws = [
            Word::reduced(vec![Gen::Q, Gen::P]),
            Word::single(Gen::Q),
            Word::one(),
            Word::reduced(vec![Gen::P, Gen::Q]),
            Word::single(Gen::P),
        ];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["1", "p", "q", "pq", "qp"]);
    }

    #[test]
    fn display_is_canonical() {
        let u = NCPoly::one()
            .sub(&p())
            .sub(&q())
            .add(&q().mul(&p()).scale(&BigInt::from(2)));
        assert_eq!(u.to_string(), "1 - p - q + 2qp");
        assert_eq!(NCPoly::zero().to_string(), "0");
    }

    #[test]
    fn reduction_order_does_not_matter() {
        let letters = vec![Gen::P, Gen::P, Gen::P, Gen::Q, Gen::Q, Gen::P, Gen::P];
        let left = Word::reduced_with(letters.clone(), |_| 0);
        let right = Word::reduced_with(letters.clone(), |r| r.len() - 1);
        assert_eq!(left, right);
        assert_eq!(left, Word::reduced(letters));
    }

    #[test]
    fn evaluate_is_a_homomorphism_on_an_example() {
        let pm: Matrix<Rational> = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let qm = Matrix::from_i64(&[&[1, 1], &[0, 0]]);
        let poly = p().mul(&q()).sub(&q().mul(&p()));
        assert_eq!(poly.evaluate(&pm, &qm), pm.commutator(&qm));
    }

    #[test]
    fn huge_coefficients_evaluate_exactly() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let poly = NCPoly::monomial(Word::one(), big.clone());
        let id: Matrix<Rational> = Matrix::identity(1);
        let v = poly.evaluate(&id, &id);
        assert_eq!(*v.get(0, 0), Rational::from_integer(big));
    }
}
