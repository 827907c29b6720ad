//! Monomials `s_alpha s_beta*` in the Leavitt algebra of the rose with two
//! loops, and finite formal sums of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Num;

use super::word::{BinaryWord, Letter};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Monomial {
    Zero,
    Term { alpha: BinaryWord, beta: BinaryWord },
}

impl Monomial {
    pub fn term(alpha: BinaryWord, beta: BinaryWord) -> Monomial {
        Monomial::Term { alpha, beta }
    }

    pub fn one() -> Monomial {
        Monomial::term(BinaryWord::empty(), BinaryWord::empty())
    }

    /// The range projection `s_w s_w*`.
    pub fn projection(w: BinaryWord) -> Monomial {
        Monomial::term(w.clone(), w)
    }

    pub fn adjoint(&self) -> Monomial {
        match self {
            Monomial::Zero => Monomial::Zero,
            Monomial::Term { alpha, beta } => Monomial::term(beta.clone(), alpha.clone()),
        }
    }

    /// Text form: `0`, `1`, `s(ab)`, `s(ab)*` or `s(ab) s(b)*`.
    pub fn render(&self) -> String {
        match self {
            Monomial::Zero => "0".into(),
            Monomial::Term { alpha, beta } => match (alpha.is_empty(), beta.is_empty()) {
                (true, true) => "1".into(),
                (false, true) => format!("s({alpha})"),
                (true, false) => format!("s({beta})*"),
                (false, false) => format!("s({alpha}) s({beta})*"),
            },
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `(s_alpha s_beta*)(s_gamma s_delta*)`, contracting `s_beta* s_gamma`.
pub fn mono_mult(x: &Monomial, y: &Monomial) -> Monomial {
    let (Monomial::Term { alpha, beta }, Monomial::Term { alpha: gamma, beta: delta }) = (x, y) else {
        return Monomial::Zero;
    };
    if let Some(rest) = gamma.strip_prefix(beta) {
        Monomial::term(alpha.concat(&rest), delta.clone())
    } else if let Some(rest) = beta.strip_prefix(gamma) {
        Monomial::term(alpha.clone(), delta.concat(&rest))
    } else {
        Monomial::Zero
    }
}

/// A finite linear combination of nonzero monomials, kept collected: like
/// terms are merged and zero coefficients dropped.
///
/// Two sums can denote the same algebra element without being structurally
/// equal, since `s_alpha s_beta* = s_{alpha a} s_{beta a}* + s_{alpha b} s_{beta b}*`.
/// [`FormalSum::equivalent`] compares modulo that relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSum<R> {
    terms: BTreeMap<(BinaryWord, BinaryWord), R>,
}

impl<R: Num + Clone> Default for FormalSum<R> {
    fn default() -> Self {
        FormalSum::zero()
    }
}

impl<R: Num + Clone> FormalSum<R> {
    pub fn zero() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from(Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &R)> {
        self.terms.iter().map(|((a, b), c)| (Monomial::term(a.clone(), b.clone()), c))
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        let Monomial::Term { alpha, beta } = m else { return };
        let key = (alpha, beta);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: R) -> Self {
        let mut out = Self::zero();
        for (m, x) in self.terms() {
            out.add_term(m, x.clone() * c.clone());
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.add_term(m.adjoint(), c.clone());
        }
        out
    }

    /// The same element with every monomial expanded until its `beta` has
    /// length `depth`. Monomials `s_alpha s_beta*` with `|beta|` fixed are
    /// linearly independent, so two sums are equal as algebra elements iff
    /// their expansions to a common depth coincide.
    pub fn expanded(&self, depth: usize) -> Self {
        let mut out = Self::zero();
        for ((alpha, beta), c) in &self.terms {
            let mut stack = vec![(alpha.clone(), beta.clone())];
            while let Some((a, b)) = stack.pop() {
                if b.len() >= depth {
                    out.add_term(Monomial::term(a, b), c.clone());
                    continue;
                }
                for l in [Letter::A, Letter::B] {
                    let (mut a2, mut b2) = (a.clone(), b.clone());
                    a2.push(l);
                    b2.push(l);
                    stack.push((a2, b2));
                }
            }
        }
        out
    }

    fn beta_depth(&self) -> usize {
        self.terms.keys().map(|(_, b)| b.len()).max().unwrap_or(0)
    }

    /// Equality as elements of the algebra.
    pub fn equivalent(&self, other: &Self) -> bool {
        let d = self.beta_depth().max(other.beta_depth());
        self.expanded(d) == other.expanded(d)
    }
}

impl<R: Num + Clone + fmt::Display> FormalSum<R> {
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| if c.is_one() { m.render() } else { format!("{c} {m}") })
            .collect();
        parts.join(" + ")
    }
}

impl<R: Num + Clone> From<Monomial> for FormalSum<R> {
    fn from(m: Monomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, R::one());
        out
    }
}

impl<R: Num + Clone> Add for FormalSum<R> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for ((a, b), c) in rhs.terms {
            self.add_term(Monomial::term(a, b), c);
        }
        self
    }
}

impl<R: Num + Clone> Neg for FormalSum<R> {
    type Output = Self;

    fn neg(self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in self.terms {
            out.add_term(Monomial::term(a, b), R::zero() - c);
        }
        out
    }
}

impl<R: Num + Clone> Sub for FormalSum<R> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Num + Clone> Mul for &FormalSum<R> {
    type Output = FormalSum<R>;

    fn mul(self, rhs: Self) -> FormalSum<R> {
        let mut out = FormalSum::zero();
        for (x, c) in self.terms() {
            for (y, d) in rhs.terms() {
                out.add_term(mono_mult(&x, &y), c.clone() * d.clone());
            }
        }
        out
    }
}
