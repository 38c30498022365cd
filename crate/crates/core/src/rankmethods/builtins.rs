//! Flattenings, catalecticants and Koszul flattenings as matrices of linear
//! forms.

use super::map::LinearMatrixMap;
use crate::error::{Error, Result};
use crate::exactalg::{rat, Rational};
use crate::varieties::{binomial, monomial_index, monomials};

/// Row-major strides of a shape.
fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

/// `F` viewed as a matrix from the column modes to the row modes. Modes are
/// 0-based; columns are the complement of `row_modes`, in increasing order.
pub fn flattening(shape: &[usize], row_modes: &[usize]) -> Result<LinearMatrixMap> {
    let mut rows_sorted = row_modes.to_vec();
    rows_sorted.sort_unstable();
    rows_sorted.dedup();
    if rows_sorted.len() != row_modes.len() || rows_sorted.iter().any(|&m| m >= shape.len()) {
        return Err(Error::InvalidArgument(format!(
            "bad row modes {row_modes:?} for {} modes",
            shape.len()
        )));
    }
    let col_modes: Vec<usize> = (0..shape.len()).filter(|m| !rows_sorted.contains(m)).collect();
    if rows_sorted.is_empty() || col_modes.is_empty() {
        return Err(Error::InvalidArgument(
            "flattening split needs modes on both sides".into(),
        ));
    }
    let row_shape: Vec<usize> = rows_sorted.iter().map(|&m| shape[m]).collect();
    let col_shape: Vec<usize> = col_modes.iter().map(|&m| shape[m]).collect();
    let (rs, cs) = (strides(&row_shape), strides(&col_shape));
    let wdim: usize = shape.iter().product();
    let mut map = LinearMatrixMap::zero(row_shape.iter().product(), col_shape.iter().product(), wdim);
    let ws = strides(shape);
    for w in 0..wdim {
        let idx: Vec<usize> = (0..shape.len()).map(|k| (w / ws[k]) % shape[k]).collect();
        let i: usize = rows_sorted.iter().zip(&rs).map(|(&m, s)| idx[m] * s).sum();
        let j: usize = col_modes.iter().zip(&cs).map(|(&m, s)| idx[m] * s).sum();
        map.push(w, i, j, rat(1));
    }
    Ok(map)
}

/// Catalecticant of degree-`degree` forms in `nvars` variables, from
/// degree-`i` dual monomials to degree-`(degree - i)` coefficients:
/// `M(F)[a][b]` is the coefficient of `x^(a+b)`, with no factorial weights.
pub fn catalecticant(nvars: usize, degree: usize, i: usize) -> Result<LinearMatrixMap> {
    if i == 0 || i >= degree {
        return Err(Error::InvalidArgument(format!(
            "catalecticant index {i} must satisfy 1 <= i <= {}",
            degree.saturating_sub(1)
        )));
    }
    if nvars == 0 {
        return Err(Error::InvalidArgument("catalecticant needs at least one variable".into()));
    }
    let rows = monomials(nvars, i);
    let cols = monomials(nvars, degree - i);
    let mut map = LinearMatrixMap::zero(rows.len(), cols.len(), binomial(nvars - 1 + degree, degree));
    for (a, ra) in rows.iter().enumerate() {
        for (b, cb) in cols.iter().enumerate() {
            let sum: Vec<usize> = ra.iter().zip(cb).map(|(x, y)| x + y).collect();
            map.push(monomial_index(&sum), a, b, rat(1));
        }
    }
    Ok(map)
}

/// `p`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Koszul flattening `L^p A (x) B* -> L^{p+1} A (x) C` of a tensor in
/// `A (x) B (x) C` with `dim A = a`. Rows index `(S', k)` with `S'` a
/// `(p+1)`-subset, columns `(S, j)` with `S` a `p`-subset, both
/// lexicographic. `e_i ^ e_S` carries the sign of sorting `i` into `S`.
pub fn koszul_flattening(a: usize, b: usize, c: usize, p: usize) -> Result<LinearMatrixMap> {
    if p == 0 || p >= a {
        return Err(Error::InvalidArgument(format!(
            "koszul degree p = {p} must satisfy 1 <= p <= {}",
            a.saturating_sub(1)
        )));
    }
    let dom = subsets(a, p);
    let cod = subsets(a, p + 1);
    let cod_index = |s: &[usize]| cod.iter().position(|x| x == s).expect("subset present");
    let mut map = LinearMatrixMap::zero(cod.len() * c, dom.len() * b, a * b * c);
    for (si, s) in dom.iter().enumerate() {
        for i in 0..a {
            if s.contains(&i) {
                continue;
            }
            let before = s.iter().filter(|&&x| x < i).count();
            let sign: Rational = if before % 2 == 0 { rat(1) } else { rat(-1) };
            let mut joined = s.clone();
            joined.push(i);
            joined.sort_unstable();
            let ti = cod_index(&joined);
            for j in 0..b {
                for k in 0..c {
                    let w = (i * b + j) * c + k;
                    map.push(w, ti * c + k, si * b + j, sign.clone());
                }
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rank, Ring};

    fn diag(n: usize, r: usize) -> Vec<Rational> {
        let mut t = vec![Rational::zero(); n * n * n];
        for i in 0..r {
            t[(i * n + i) * n + i] = rat(1);
        }
        t
    }

    fn outer(x: &[i64], y: &[i64], z: &[i64]) -> Vec<Rational> {
        let mut t = Vec::new();
        for a in x {
            for b in y {
                for c in z {
                    t.push(rat(a * b * c));
                }
            }
        }
        t
    }

    #[test]
    fn flattening_shapes_and_ranks() {
        let m = flattening(&[2, 3, 4], &[1]).unwrap();
        assert_eq!((m.rows(), m.cols(), m.wdim()), (3, 8, 24));
        let f = flattening(&[3, 3, 3], &[0]).unwrap();
        for r in 0..=3 {
            assert_eq!(rank(&f.evaluate(&diag(3, r)).unwrap()), r);
        }
        let one = outer(&[1, 2, -1], &[0, 1, 3], &[2, 2, 5]);
        for split in [[0usize].as_slice(), &[1], &[2], &[0, 1], &[1, 2]] {
            let fl = flattening(&[3, 3, 3], split).unwrap();
            assert_eq!(rank(&fl.evaluate(&one).unwrap()), 1);
        }
        assert!(flattening(&[2, 2], &[]).is_err());
        assert!(flattening(&[2, 2], &[0, 1]).is_err());
        assert!(flattening(&[2, 2], &[2]).is_err());
    }

    #[test]
    fn flattening_entry_placement() {
        // entry (i, j, k) of a 2x3x4 tensor sits at row j, column i*4 + k
        let m = flattening(&[2, 3, 4], &[1]).unwrap();
        let mut t = vec![Rational::zero(); 24];
        t[(3 + 2) * 4 + 1] = rat(7); // (1, 2, 1)
        let e = m.evaluate(&t).unwrap();
        assert_eq!(e.get(2, 4 + 1), &rat(7));
    }

    #[test]
    fn catalecticant_examples() {
        let c = catalecticant(2, 3, 1).unwrap();
        // monomials of degree 3 in x0, x1: x0^3, x0^2 x1, x0 x1^2, x1^3
        let x03 = vec![rat(1), rat(0), rat(0), rat(0)];
        assert_eq!(rank(&c.evaluate(&x03).unwrap()), 1);
        let sum = vec![rat(1), rat(0), rat(0), rat(1)];
        assert_eq!(rank(&c.evaluate(&sum).unwrap()), 2);
        assert!(catalecticant(2, 3, 0).is_err());
        assert!(catalecticant(2, 3, 3).is_err());
        let c4 = catalecticant(4, 3, 1).unwrap();
        assert_eq!((c4.rows(), c4.cols(), c4.wdim()), (4, 10, 20));
    }

    #[test]
    fn koszul_rank_one_and_diagonal() {
        let k = koszul_flattening(3, 3, 3, 1).unwrap();
        assert_eq!((k.rows(), k.cols()), (9, 9));
        let one = outer(&[1, 2, -1], &[0, 1, 3], &[2, 2, 5]);
        assert_eq!(rank(&k.evaluate(&one).unwrap()), 2);
        for r in 0..=3 {
            assert_eq!(rank(&k.evaluate(&diag(3, r)).unwrap()), 2 * r);
        }
        assert_eq!(rank(&k.evaluate(&vec![Rational::zero(); 27]).unwrap()), 0);
        assert!(koszul_flattening(3, 3, 3, 0).is_err());
        assert!(koszul_flattening(3, 3, 3, 3).is_err());
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(5, 2).len(), 10);
    }
}
