use super::poly2::{Poly2, Var};

/// Sylvester resultant of `p` and `q` eliminating `v`.
///
/// The matrix has the `deg q` shifted rows of `p` first, then the `deg p` rows of `q`,
/// with coefficients in ascending powers of `v`. A side constant in `v` gives
/// `Res(c, q) = c^deg q`; a zero side gives zero.
pub fn resultant(p: &Poly2, q: &Poly2, v: Var) -> Poly2 {
    if p.is_zero() || q.is_zero() {
        return Poly2::zero();
    }
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    if m == 0 {
        return pc[0].pow(n as u32);
    }
    if n == 0 {
        return qc[0].pow(m as u32);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![Poly2::zero(); size];
        for (k, c) in pc.iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Poly2::zero(); size];
        for (k, c) in qc.iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// Fraction-free determinant; every division is exact.
pub fn bareiss_det(mut a: Vec<Vec<Poly2>>) -> Poly2 {
    let n = a.len();
    if n == 0 {
        return Poly2::one();
    }
    let mut negate = false;
    let mut prev = Poly2::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Poly2::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
