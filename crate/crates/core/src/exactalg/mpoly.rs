//! Sparse multivariate polynomials over an exact field.
//!
//! Terms are stored in a BTreeMap keyed by exponent vectors (lexicographic
//! order on `Vec<u32>`), aligned with a shared, ordered variable list. The
//! resultant is computed as the determinant of the Sylvester matrix by
//! fraction-free Bareiss elimination to control coefficient blow-up.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Poly, Rat, Scalar};
use crate::error::{AlgError, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<T: Scalar> {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> MPoly<T> {
    pub fn zero(vars: &Arc<Vec<String>>) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: T) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Arc<Vec<String>>) -> Self {
        MPoly::constant(vars, T::one())
    }

    pub fn var(vars: &Arc<Vec<String>>, name: &str) -> Result<Self> {
        let i = Self::index_of(vars, name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = MPoly::zero(vars);
        p.terms.insert(e, T::one());
        Ok(p)
    }

    pub fn monomial(vars: &Arc<Vec<String>>, c: T, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Embed a univariate polynomial as a polynomial in `name`.
    pub fn from_poly(vars: &Arc<Vec<String>>, p: &Poly<T>, name: &str) -> Result<Self> {
        let i = Self::index_of(vars, name)?;
        let mut out = MPoly::zero(vars);
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0; vars.len()];
            e[i] = k as u32;
            out.terms.insert(e, c.clone());
        }
        Ok(out)
    }

    fn index_of(vars: &Arc<Vec<String>>, name: &str) -> Result<usize> {
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgError::MissingVariable(name.to_string()))
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        Self::index_of(&self.vars, name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn constant_value(&self) -> Option<T> {
        if self.is_zero() {
            return Some(T::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&k| k == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn check_vars(&self, rhs: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &rhs.vars) || self.vars == rhs.vars,
            "operands over different variable sets"
        );
    }

    fn insert_add(&mut self, e: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_vars(rhs);
        let mut out = MPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        e.iter().zip(exps).map(|(a, b)| a + b).collect(),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn degree_in(&self, var: &str) -> Result<Option<u32>> {
        let i = self.var_index(var)?;
        Ok(self.terms.keys().map(|e| e[i]).max())
    }

    pub fn involves(&self, var: &str) -> Result<bool> {
        let i = self.var_index(var)?;
        Ok(self.terms.keys().any(|e| e[i] > 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Coefficient of `var^k`, with the `var` exponent zeroed (same var set).
    pub fn coeff_in(&self, var: &str, k: u32) -> Result<Self> {
        let i = self.var_index(var)?;
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e2 = e.clone();
                e2[i] = 0;
                out.insert_add(e2, c.clone());
            }
        }
        Ok(out)
    }

    /// All coefficients as polynomials in the remaining variables, ascending.
    pub fn coeffs_in(&self, var: &str) -> Result<Vec<Self>> {
        let d = match self.degree_in(var)? {
            None => return Ok(vec![]),
            Some(d) => d,
        };
        (0..=d).map(|k| self.coeff_in(var, k)).collect()
    }

    /// Substitute `var := g`.
    pub fn substitute(&self, var: &str, g: &Self) -> Result<Self> {
        self.check_vars(g);
        let i = self.var_index(var)?;
        let mut powers: BTreeMap<u32, MPoly<T>> = BTreeMap::new();
        powers.insert(0, MPoly::one(&self.vars));
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e[i];
            powers.entry(k).or_insert_with(|| g.pow(k));
            let mut e2 = e.clone();
            e2[i] = 0;
            let term = MPoly::monomial(&self.vars, c.clone(), e2);
            out = out.add(&term.mul(&powers[&k]));
        }
        Ok(out)
    }

    fn leading(&self) -> Option<(&Vec<u32>, &T)> {
        self.terms.iter().next_back()
    }

    /// Exact multivariate quotient under lex order; `None` if not divisible.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        self.check_vars(d);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(&self.vars));
        }
        let (de, dc) = {
            let (e, c) = d.leading().unwrap();
            (e.clone(), c.clone())
        };
        let dc_inv = dc.inv().unwrap();
        let mut r = self.clone();
        let mut q = MPoly::zero(&self.vars);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = rc.mul(&dc_inv);
            let t = MPoly::monomial(&self.vars, qc, qe);
            q = q.add(&t);
            r = r.sub(&t.mul(d));
        }
        Some(q)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn bareiss_det(matrix: Vec<Vec<Self>>) -> Self {
        let n = matrix.len();
        assert!(n > 0 && matrix.iter().all(|row| row.len() == n));
        let vars = matrix[0][0].vars.clone();
        if n == 1 {
            return matrix.into_iter().next().unwrap().into_iter().next().unwrap();
        }
        let mut m = matrix;
        let mut sign_neg = false;
        let mut prev = MPoly::one(&vars);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign_neg = !sign_neg;
                    }
                    None => return MPoly::zero(&vars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division must be exact");
                }
                m[i][k] = MPoly::zero(&vars);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign_neg {
            det.neg()
        } else {
            det
        }
    }

    /// Sylvester resultant with respect to `var`, fraction-free.
    ///
    /// Vanishes iff the inputs share a root in `var` over the algebraic
    /// closure of the remaining-variable function field. `var` must occur in
    /// at least one input; a degree-0 side contributes `c^{deg other}`.
    pub fn resultant(p: &Self, q: &Self, var: &str) -> Result<Self> {
        p.check_vars(q);
        let dp = p.degree_in(var)?.unwrap_or(0) as usize;
        let dq = q.degree_in(var)?.unwrap_or(0) as usize;
        if (dp == 0 && dq == 0) || p.is_zero() || q.is_zero() {
            return Err(AlgError::MissingVariable(format!(
                "resultant: {var} absent from both inputs"
            )));
        }
        let pc = p.coeffs_in(var)?;
        let qc = q.coeffs_in(var)?;
        if dp == 0 {
            return Ok(p.pow(dq as u32));
        }
        if dq == 0 {
            return Ok(q.pow(dp as u32));
        }
        let n = dp + dq;
        let vars = p.vars.clone();
        let mut matrix = vec![vec![MPoly::zero(&vars); n]; n];
        for (i, row) in matrix.iter_mut().enumerate().take(dq) {
            for (j, c) in pc.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
        }
        for i in 0..dp {
            for (j, c) in qc.iter().rev().enumerate() {
                matrix[dq + i][i + j] = c.clone();
            }
        }
        Ok(Self::bareiss_det(matrix))
    }

    /// Exact square root over the coefficient field, decided recursively by a
    /// long square root in the lex-largest occurring variable.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let main = (0..self.vars.len()).find(|&i| self.terms.keys().any(|e| e[i] > 0));
        let Some(main) = main else {
            // constant
            let c = self.terms.values().next().unwrap();
            return Some(MPoly::constant(&self.vars, c.sqrt()?));
        };
        let var = self.vars[main].clone();
        let d = self.degree_in(&var).unwrap().unwrap();
        if !d.is_multiple_of(2) {
            return None;
        }
        let m = d / 2;
        let lc = self.coeff_in(&var, d).unwrap();
        let s_lc = lc.sqrt()?;
        let xv = MPoly::var(&self.vars, &var).unwrap();
        let mut s = s_lc.mul(&xv.pow(m));
        let twice = s_lc.mul_scalar(&T::from_i64(2));
        for k in (0..m).rev() {
            let r = self.sub(&s.mul(&s));
            if r.is_zero() {
                break;
            }
            let top = r.coeff_in(&var, m + k).unwrap();
            if top.is_zero() {
                continue;
            }
            let ck = top.exact_div(&twice)?;
            s = s.add(&ck.mul(&xv.pow(k)));
        }
        if self.sub(&s.mul(&s)).is_zero() {
            Some(s)
        } else {
            None
        }
    }

    /// Canonical text form, terms in descending lex order.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = String::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&self.vars[i]);
                if k > 1 {
                    mono.push_str(&format!("^{k}"));
                }
            }
            let needs_coef = mono.is_empty() || mag != "1";
            let wrapped = mag.contains('/') && !mono.is_empty() && mag.contains(['+', '-']);
            if needs_coef {
                if wrapped {
                    out.push_str(&format!("({mag})"));
                } else {
                    out.push_str(&mag);
                }
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono);
        }
        out
    }
}

impl MPoly<Rat> {
    /// Scalar content: the positive rational c with `self = c * primitive`
    /// where `primitive` has coprime integer coefficients; the sign is chosen
    /// so the lex-leading coefficient of the primitive part is positive.
    pub fn rational_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::from_int(0);
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = content.neg();
        }
        content
    }

    /// Per-variable monomial content (minimum exponents).
    pub fn monomial_content(&self) -> Vec<u32> {
        let n = self.vars.len();
        let mut mins = vec![u32::MAX; n];
        for e in self.terms.keys() {
            for (m, &k) in mins.iter_mut().zip(e) {
                *m = (*m).min(k);
            }
        }
        if self.is_zero() {
            vec![0; n]
        } else {
            mins
        }
    }

    /// Strip scalar and monomial content; returns (content, monomial, primitive).
    pub fn strip_content(&self) -> (Rat, Vec<u32>, Self) {
        if self.is_zero() {
            return (Rat::from_int(0), vec![0; self.vars.len()], self.clone());
        }
        let c = self.rational_content();
        let m = self.monomial_content();
        let inv = c.inv().unwrap();
        let stripped = MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| {
                    (
                        e.iter().zip(&m).map(|(x, y)| x - y).collect(),
                        a.mul(&inv),
                    )
                })
                .collect(),
        };
        (c, m, stripped)
    }
}

impl<T: Scalar> fmt::Display for MPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Shared variable list constructor.
pub fn varset(names: &[&str]) -> Arc<Vec<String>> {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn vs() -> Arc<Vec<String>> {
        varset(&["y", "v"])
    }

    fn y() -> MPoly<Rat> {
        MPoly::var(&vs(), "y").unwrap()
    }

    fn v() -> MPoly<Rat> {
        MPoly::var(&vs(), "v").unwrap()
    }

    fn c(n: i64) -> MPoly<Rat> {
        MPoly::constant(&vs(), Rat::from_int(n))
    }

    #[test]
    fn resultant_common_root() {
        // Res_y(y^2 - 1, y - 1) = 0
        let p = y().pow(2).sub(&c(1));
        let q = y().sub(&c(1));
        let r = MPoly::resultant(&p, &q, "y").unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn resultant_sylvester_3x3() {
        // Res_y(y^2 + 1, y - 1) = 2, frozen from the hand-expanded 3x3
        // Sylvester determinant |1 0 1; 1 -1 0; 0 1 -1|.
        let p = y().pow(2).add(&c(1));
        let q = y().sub(&c(1));
        let r = MPoly::resultant(&p, &q, "y").unwrap();
        assert_eq!(r, c(2));
        // Independent oracle: naive Laplace expansion of the same matrix.
        let vars = vs();
        let pc = p.coeffs_in("y").unwrap();
        let qc = q.coeffs_in("y").unwrap();
        let mut m = vec![vec![MPoly::zero(&vars); 3]; 3];
        for (j, cc) in pc.iter().rev().enumerate() {
            m[0][j] = cc.clone();
        }
        for i in 0..2 {
            for (j, cc) in qc.iter().rev().enumerate() {
                m[1 + i][i + j] = cc.clone();
            }
        }
        let det = laplace_det(&m);
        assert_eq!(det, r);
    }

    fn laplace_det(m: &[Vec<MPoly<Rat>>]) -> MPoly<Rat> {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let vars = m[0][0].vars().clone();
        let mut acc = MPoly::zero(&vars);
        for j in 0..n {
            let minor: Vec<Vec<MPoly<Rat>>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let term = m[0][j].mul(&laplace_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn resultant_error_when_var_absent() {
        let p = v().pow(2).add(&c(1));
        assert!(MPoly::resultant(&p, &p, "y").is_err());
    }

    #[test]
    fn resultant_sign_symmetry_and_gcd_agreement() {
        // Res(p,q) = +/- Res(q,p); zero exactly when gcd over Q(v)[y] is
        // nonconstant. Cross-checked on random degree <= 4 pairs against the
        // gcd criterion computed through a univariate-in-y view.
        let mut rng = Rng::new(41);
        let vars = vs();
        for trial in 0..120 {
            let rand_poly = |rng: &mut Rng| {
                let dy = rng.below(4) as u32;
                let mut p = MPoly::zero(&vars);
                for ey in 0..=dy {
                    for ev in 0..=1u32 {
                        if rng.below(3) == 0 {
                            continue;
                        }
                        p = p.add(&MPoly::monomial(
                            &vars,
                            rng.rat(),
                            vec![ey, ev],
                        ));
                    }
                }
                p
            };
            let mut p = rand_poly(&mut rng);
            let mut q = rand_poly(&mut rng);
            // Plant a common factor in a third of the trials.
            if trial % 3 == 0 {
                let f = y().mul_scalar(&Rat::from_int(1)).add(&v());
                p = p.mul(&f);
                q = q.mul(&f);
            }
            if !p.involves("y").unwrap() || !q.involves("y").unwrap() {
                continue;
            }
            let r_pq = MPoly::resultant(&p, &q, "y").unwrap();
            let r_qp = MPoly::resultant(&q, &p, "y").unwrap();
            assert!(r_pq == r_qp || r_pq == r_qp.neg());
            let g = gcd_over_fraction_field(&p, &q);
            assert_eq!(r_pq.is_zero(), g > 0, "trial {trial}");
        }
    }

    // Degree of gcd(p, q) in y over Q(v): by Gauss, the y-degree of the
    // polynomial gcd over Q[y, v].
    fn gcd_over_fraction_field(p: &MPoly<Rat>, q: &MPoly<Rat>) -> usize {
        let g = crate::exactalg::mpoly_gcd(p, q);
        g.degree_in("y").unwrap().unwrap_or(0) as usize
    }

    #[test]
    fn exact_div_and_content() {
        let p = y().pow(2).sub(&v().pow(2));
        let d = y().sub(&v());
        let q = p.exact_div(&d).unwrap();
        assert_eq!(q, y().add(&v()));
        assert!(p.exact_div(&y().add(&c(1))).is_none());

        let f = y().mul(&v()).mul_scalar(&Rat::from_frac(6, 4)).add(
            &y().pow(2).mul(&v()).mul_scalar(&Rat::from_int(3)),
        );
        let (content, mono, prim) = f.strip_content();
        assert_eq!(content, Rat::from_frac(3, 2));
        assert_eq!(mono, vec![1, 1]);
        assert_eq!(prim, c(1).add(&y().mul_scalar(&Rat::from_int(2))));
    }

    #[test]
    fn sqrt_multivariate() {
        let p = y().add(&v()).pow(2).mul_scalar(&Rat::from_frac(9, 4));
        let s = p.sqrt().unwrap();
        assert_eq!(s.mul(&s), p);
        // alpha^3 monomial is not a square
        let a3 = v().pow(3);
        assert!(a3.sqrt().is_none());
    }
}
