//! Univariate polynomials over F_p: characteristic polynomials and
//! factorisation into distinct irreducible factors.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so
//! the zero polynomial is the empty vector.

use rand::Rng;

use super::{Fp, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Fp,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: Fp, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Fp) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Fp) -> Self {
        Poly::new(field, vec![1])
    }

    /// The monomial `x`.
    pub fn x(field: Fp) -> Self {
        Poly::new(field, vec![0, 1])
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u32 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).unwrap();
        Poly::new(self.field, self.coeffs.iter().map(|&c| self.field.mul(c, inv)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = self.field;
        let c = (0..n)
            .map(|i| f.add(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = self.field;
        let c = (0..n)
            .map(|i| f.sub(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Poly::new(f, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let f = self.field;
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        if rem.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(divisor.lead()).unwrap();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates the polynomial at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let f = self.field;
        let n = m.rows();
        let mut acc = Matrix::zeros(f, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * m;
            if c != 0 {
                for i in 0..n {
                    let v = f.add(acc.get(i, i), c);
                    acc.set(i, i, v);
                }
            }
        }
        acc
    }
}

/// Characteristic polynomial `det(xI - m)` via reduction to upper
/// Hessenberg form.
pub fn charpoly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "charpoly of a non-square matrix");
    let f = m.field();
    let n = m.rows();
    let mut h = m.clone();
    // similarity transforms down to Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
            continue;
        };
        if piv != j + 1 {
            for c in 0..n {
                let (a, b) = (h.get(piv, c), h.get(j + 1, c));
                h.set(piv, c, b);
                h.set(j + 1, c, a);
            }
            for r in 0..n {
                let (a, b) = (h.get(r, piv), h.get(r, j + 1));
                h.set(r, piv, b);
                h.set(r, j + 1, a);
            }
        }
        let inv = f.inv(h.get(j + 1, j)).unwrap();
        for i in j + 2..n {
            let u = f.mul(h.get(i, j), inv);
            if u == 0 {
                continue;
            }
            // row_i -= u * row_{j+1}
            for c in 0..n {
                let v = f.sub(h.get(i, c), f.mul(u, h.get(j + 1, c)));
                h.set(i, c, v);
            }
            // col_{j+1} += u * col_i
            for r in 0..n {
                let v = f.add(h.get(r, j + 1), f.mul(u, h.get(r, i)));
                h.set(r, j + 1, v);
            }
        }
    }
    // p_k = charpoly of the leading k x k block
    let mut polys: Vec<Poly> = vec![Poly::one(f)];
    for k in 1..=n {
        let kk = k - 1;
        let lin = Poly::new(f, vec![f.neg(h.get(kk, kk)), 1]);
        let mut pk = lin.mul(&polys[k - 1]);
        let mut prod = 1 % f.modulus();
        for i in 1..k {
            // term for h[k-1-i][k-1]
            prod = f.mul(prod, h.get(kk - i + 1, kk - i));
            let coef = f.mul(prod, h.get(kk - i, kk));
            if coef != 0 {
                let term = polys[k - i - 1].mul(&Poly::new(f, vec![coef]));
                pk = pk.sub(&term);
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

/// Distinct monic irreducible factors of `g` (multiplicities dropped).
pub fn irreducible_factors<R: Rng + ?Sized>(g: &Poly, rng: &mut R) -> Vec<Poly> {
    let f = g.field;
    let g = g.monic();
    let Some(deg) = g.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let p = f.modulus() as u64;
    let x = Poly::x(f);
    // equal-degree parts: E_k = gcd(g, x^{p^k} - x) / (parts of degree dividing k)
    let mut found: Vec<(usize, Poly)> = Vec::new();
    let mut frob = x.rem(&g);
    let mut covered = 0;
    for k in 1..=deg {
        if covered >= deg {
            break;
        }
        frob = frob.powmod(p, &g);
        let mut r = g.gcd(&frob.sub(&x));
        for (j, e) in &found {
            if k % j == 0 {
                r = r.divrem(e).0;
            }
        }
        if r.degree().unwrap_or(0) > 0 {
            covered += r.degree().unwrap();
            found.push((k, r));
        }
    }
    let mut out = Vec::new();
    for (k, e) in found {
        equal_degree_split(&e, k, rng, &mut out);
    }
    out.sort_by(|a, b| a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| a.coeffs.cmp(&b.coeffs)));
    out
}

fn equal_degree_split<R: Rng + ?Sized>(e: &Poly, k: usize, rng: &mut R, out: &mut Vec<Poly>) {
    let f = e.field;
    let n = e.degree().unwrap();
    if n == k {
        out.push(e.monic());
        return;
    }
    let p = f.modulus() as u64;
    loop {
        let a = Poly::new(f, (0..n).map(|_| rng.gen_range(0..f.modulus())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^{2^{k-1}}
            let mut t = a.rem(e);
            let mut acc = t.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(e);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^{(p^k - 1)/2} = (a^{1 + p + ... + p^{k-1}})^{(p-1)/2}
            let mut c = a.rem(e);
            let mut norm = c.clone();
            for _ in 1..k {
                c = c.powmod(p, e);
                norm = norm.mul(&c).rem(e);
            }
            norm.powmod((p - 1) / 2, e).sub(&Poly::one(f))
        };
        let d = e.gcd(&b);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < n {
            equal_degree_split(&d, k, rng, out);
            equal_degree_split(&e.divrem(&d).0, k, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    /// det(λI - m) for every λ in F_p, by Gaussian elimination.
    fn charpoly_values(m: &Matrix) -> Vec<u32> {
        let f = m.field();
        let n = m.rows();
        (0..f.modulus())
            .map(|lam| {
                let mut a = m.scale(f.neg(1));
                for i in 0..n {
                    a.set(i, i, f.add(a.get(i, i), lam));
                }
                a.determinant()
            })
            .collect()
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        let f = fp(31);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..7 {
            for _ in 0..5 {
                let data = (0..n * n).map(|_| rng.gen_range(0..31)).collect();
                let m = Matrix::from_vec(f, n, n, data);
                let cp = charpoly(&m);
                assert_eq!(cp.degree(), Some(n));
                let values: Vec<u32> = (0..31).map(|x| cp.eval(x)).collect();
                assert_eq!(values, charpoly_values(&m));
            }
        }
    }

    #[test]
    fn cayley_hamilton() {
        let f = fp(7);
        let m = Matrix::from_rows(f, &[vec![1, 2, 0], vec![0, 3, 1], vec![4, 0, 5]]).unwrap();
        assert!(charpoly(&m).eval_matrix(&m).is_zero());
    }

    #[test]
    fn factors_of_known_products() {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x-1)^2 (x-2) (x^2-2); the quadratic is irreducible because
        // 2 is a non-residue mod 101 (101 = 5 mod 8). Sorted by degree then coefficients.
        let l1 = Poly::new(f, vec![f.neg(1), 1]);
        let l2 = Poly::new(f, vec![f.neg(2), 1]);
        let q = Poly::new(f, vec![f.neg(2), 0, 1]);
        let g = l1.mul(&l1).mul(&l2).mul(&q);
        let facs = irreducible_factors(&g, &mut rng);
        assert_eq!(facs, vec![l2.clone(), l1.clone(), q.clone()]);

        let f2 = fp(2);
        let a = Poly::new(f2, vec![1, 1]); // x+1
        let b = Poly::new(f2, vec![1, 1, 1]); // x^2+x+1
        let c = Poly::new(f2, vec![1, 1, 0, 1]); // x^3+x+1
        let d = Poly::new(f2, vec![1, 0, 1, 1]); // x^3+x^2+1
        let g = a.mul(&a).mul(&b).mul(&c).mul(&d);
        let facs = irreducible_factors(&g, &mut rng);
        assert_eq!(facs.len(), 4);
        for h in [&a, &b, &c, &d] {
            assert!(facs.contains(h));
        }
    }

    #[test]
    fn splits_products_of_distinct_linears() {
        let f = fp(13);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut g = Poly::one(f);
        for r in [0u32, 3, 5, 12] {
            g = g.mul(&Poly::new(f, vec![f.neg(r), 1]));
        }
        let facs = irreducible_factors(&g, &mut rng);
        let roots: Vec<u32> = facs.iter().map(|h| f.neg(h.coeffs()[0])).collect();
        assert_eq!(facs.len(), 4);
        for r in [0u32, 3, 5, 12] {
            assert!(roots.contains(&r));
        }
    }
}
