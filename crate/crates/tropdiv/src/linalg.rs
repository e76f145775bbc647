//! Small exact linear algebra: rational elimination, integer Smith normal
//! form, and Fourier-Motzkin projection for the handful of tiny systems the
//! lattice computations need. Everything is dense and exact; matrices here
//! have at most a few rows.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type QMat = Vec<Vec<Rational>>;
pub type ZMat = Vec<Vec<BigInt>>;

pub fn identity_q(n: usize) -> QMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &QMat, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn transpose(m: &QMat) -> QMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Determinant by exact Gaussian elimination.
pub fn det(m: &QMat) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut result = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            result = -result;
        }
        let pv = a[col][col].clone();
        result = result * pv.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pv;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
    }
    result
}

/// Row-reduces `a` (augmented with `b` when given) and returns the reduced
/// matrix, the reduced right-hand side, and the pivot column of each row.
fn row_reduce(a: &QMat, b: Option<&[Rational]>) -> (QMat, Vec<Rational>, Vec<Option<usize>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.to_vec();
    let mut rhs: Vec<Rational> = match b {
        Some(b) => b.to_vec(),
        None => vec![Rational::zero(); rows],
    };
    let mut pivots: Vec<Option<usize>> = vec![None; rows];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, row);
        rhs.swap(p, row);
        let pv = m[row][col].clone();
        for c in col..cols {
            m[row][c] = &m[row][c] / &pv;
        }
        rhs[row] = &rhs[row] / &pv;
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let sub = &f * &m[row][c];
                    m[r][c] = &m[r][c] - &sub;
                }
                let sub = &f * &rhs[row];
                rhs[r] = &rhs[r] - &sub;
            }
        }
        pivots[row] = Some(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    (m, rhs, pivots)
}

pub fn rank(a: &QMat) -> usize {
    let (_, _, pivots) = row_reduce(a, None);
    pivots.iter().filter(|p| p.is_some()).count()
}

/// All solutions of `a x = b` over the rationals: a particular solution plus
/// a basis of the kernel, or `None` when inconsistent.
pub fn solve_general(a: &QMat, b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (m, rhs, pivots) = row_reduce(a, Some(b));
    for r in 0..rows {
        if pivots[r].is_none() && !rhs[r].is_zero() {
            return None;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().flatten().copied().collect();
    let mut particular = vec![Rational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        particular[c] = rhs[r].clone();
    }
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &c) in pivot_cols.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}

/// Inverse of a square nonsingular matrix.
pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        let (sol, kernel) = solve_general(a, &e)?;
        if !kernel.is_empty() {
            return None;
        }
        cols.push(sol);
    }
    let mut inv = vec![vec![Rational::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            inv[i][j] = col[i].clone();
        }
    }
    Some(inv)
}

fn identity_z(n: usize) -> ZMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form: returns `(u, s, v)` with `u * a * v = s`, `u` and `v`
/// unimodular, and `s` diagonal with each entry dividing the next.
pub fn smith_normal_form(a: &ZMat) -> (ZMat, ZMat, ZMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut s = a.to_vec();
    let mut u = identity_z(rows);
    let mut v = identity_z(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Pick the entry of smallest absolute value in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !s[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| s[i][j].abs() < s[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in s.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        let mut dirty = false;
        for i in t + 1..rows {
            if s[i][t].is_zero() {
                continue;
            }
            let q = div_round(&s[i][t], &s[t][t]);
            if !q.is_zero() {
                for j in 0..cols {
                    let sub = &q * &s[t][j];
                    s[i][j] -= sub;
                }
                for j in 0..rows {
                    let sub = &q * &u[t][j];
                    u[i][j] -= sub;
                }
            }
            if !s[i][t].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..cols {
            if s[t][j].is_zero() {
                continue;
            }
            let q = div_round(&s[t][j], &s[t][t]);
            if !q.is_zero() {
                for i in 0..rows {
                    let sub = &q * &s[i][t];
                    s[i][j] -= sub;
                    let sub = &q * &v[i][t];
                    v[i][j] -= sub;
                }
            }
            if !s[t][j].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }

        // Enforce the divisibility chain: s[t][t] must divide the rest.
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&s[i][j] % &s[t][t]).is_zero() {
                    for k in 0..cols {
                        let add = s[i][k].clone();
                        s[t][k] += add;
                    }
                    for k in 0..rows {
                        let add = u[i][k].clone();
                        u[t][k] += add;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        if s[t][t].is_negative() {
            for j in 0..cols {
                s[t][j] = -s[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    (u, s, v)
}

/// Rounded integer division, used to shrink remainders fast in the SNF loop.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if &r * &two >= b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Integer solutions of `a x = b`: a particular solution plus a basis of the
/// integer kernel, or `None` when no integer solution exists.
pub fn solve_integer(a: &ZMat, b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        let basis = identity_z(cols);
        let basis = (0..cols).map(|j| basis[j].clone()).collect();
        return Some((vec![BigInt::zero(); cols], basis));
    }
    let (u, s, v) = smith_normal_form(a);
    let y: Vec<BigInt> = (0..rows)
        .map(|i| (0..rows).map(|j| &u[i][j] * &b[j]).sum())
        .collect();
    let mut z = vec![BigInt::zero(); cols];
    let mut free = Vec::new();
    for i in 0..cols {
        let d = if i < rows { s[i][i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if i < rows && !y[i].is_zero() {
                return None;
            }
            free.push(i);
        } else {
            let (q, r) = num_integer::Integer::div_mod_floor(&y[i], &d);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    for i in cols..rows {
        if !y[i].is_zero() {
            return None;
        }
    }
    let particular: Vec<BigInt> = (0..cols)
        .map(|i| (0..cols).map(|j| &v[i][j] * &z[j]).sum())
        .collect();
    let basis: Vec<Vec<BigInt>> = free
        .iter()
        .map(|&f| (0..cols).map(|i| v[i][f].clone()).collect())
        .collect();
    Some((particular, basis))
}

/// A linear constraint `coeffs . x  (<|<=)  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub strict: bool,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational, strict: bool) -> Self {
        Constraint { coeffs, rhs, strict }
    }
}

/// Eliminates variable `var` by Fourier-Motzkin projection.
fn eliminate(cons: &[Constraint], var: usize) -> Vec<Constraint> {
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut rest = Vec::new();
    for c in cons {
        let a = &c.coeffs[var];
        if a.is_zero() {
            rest.push(c.clone());
        } else if a.is_positive() {
            uppers.push(c.clone());
        } else {
            lowers.push(c.clone());
        }
    }
    for lo in &lowers {
        for up in &uppers {
            // lo: a x + r <= b with a < 0  =>  x >= (b - r)/a-ish; combine by
            // scaling so the x terms cancel.
            let la = lo.coeffs[var].abs();
            let ua = up.coeffs[var].abs();
            let n = cons[0].coeffs.len();
            let mut coeffs = Vec::with_capacity(n);
            for k in 0..n {
                coeffs.push(&lo.coeffs[k] * &ua + &up.coeffs[k] * &la);
            }
            coeffs[var] = Rational::zero();
            let rhs = &lo.rhs * &ua + &up.rhs * &la;
            rest.push(Constraint::new(coeffs, rhs, lo.strict || up.strict));
        }
    }
    rest
}

fn constant_feasible(cons: &[Constraint]) -> bool {
    cons.iter().all(|c| {
        debug_assert!(c.coeffs.iter().all(|a| a.is_zero()));
        if c.strict {
            Rational::zero() < c.rhs
        } else {
            Rational::zero() <= c.rhs
        }
    })
}

/// Whether the system has any real solution.
pub fn feasible(cons: &[Constraint], nvars: usize) -> bool {
    let mut cur = cons.to_vec();
    for v in (0..nvars).rev() {
        cur = eliminate(&cur, v);
    }
    constant_feasible(&cur)
}

/// Bounds of variable 0 after projecting all other variables away. Returns
/// `None` if infeasible; a `None` bound means unbounded on that side.
fn var0_bounds(cons: &[Constraint], nvars: usize) -> Option<(Option<Rational>, Option<Rational>)> {
    let mut cur = cons.to_vec();
    for v in (1..nvars).rev() {
        cur = eliminate(&cur, v);
    }
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for c in &cur {
        let a = c.coeffs[0].clone();
        if a.is_zero() {
            if c.strict && !(Rational::zero() < c.rhs) {
                return None;
            }
            if !c.strict && !(Rational::zero() <= c.rhs) {
                return None;
            }
            continue;
        }
        let bound = &c.rhs / &a;
        if a.is_positive() {
            upper = Some(match upper {
                Some(u) => u.min(bound),
                None => bound,
            });
        } else {
            lower = Some(match lower {
                Some(l) => l.max(bound),
                None => bound,
            });
        }
    }
    Some((lower, upper))
}

/// Enumerates every integer point of the system, which must describe a
/// bounded region. Returns `None` when a projection is unbounded.
pub fn integer_points(cons: &[Constraint], nvars: usize) -> Option<Vec<Vec<BigInt>>> {
    if nvars == 0 {
        return Some(if constant_feasible(cons) { vec![Vec::new()] } else { Vec::new() });
    }
    let Some((lower, upper)) = var0_bounds(cons, nvars) else {
        return Some(Vec::new());
    };
    let (lower, upper) = (lower?, upper?);
    let lo = lower.ceil_int();
    let hi = upper.floor_int();
    let mut out = Vec::new();
    let mut k = lo;
    while k <= hi {
        let kq = Rational::from_bigint(k.clone());
        // Substitute x0 = k and recurse on the remaining variables.
        let reduced: Vec<Constraint> = cons
            .iter()
            .map(|c| {
                Constraint::new(
                    c.coeffs[1..].to_vec(),
                    &c.rhs - &(&c.coeffs[0] * &kq),
                    c.strict,
                )
            })
            .collect();
        if let Some(rest) = integer_points(&reduced, nvars - 1) {
            for mut p in rest {
                p.insert(0, k.clone());
                out.push(p);
            }
        } else {
            return None;
        }
        k += BigInt::one();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn qm(rows: &[&[i64]]) -> QMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn det_3x3() {
        let m = qm(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(det(&m), Rational::from_int(5));
        let singular = qm(&[&[1, 2], &[2, 4]]);
        assert_eq!(det(&singular), Rational::zero());
    }

    #[test]
    fn solve_and_kernel() {
        let m = qm(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![Rational::from_int(3), Rational::from_int(5)];
        let (p, k) = solve_general(&m, &b).unwrap();
        assert_eq!(k.len(), 1);
        let check = mat_vec(&m, &p);
        assert_eq!(check, b);
        let kv = mat_vec(&m, &k[0]);
        assert!(kv.iter().all(|x| x.is_zero()));
        // Inconsistent system.
        let m2 = qm(&[&[1, 1], &[2, 2]]);
        let b2 = vec![Rational::from_int(1), Rational::from_int(3)];
        assert!(solve_general(&m2, &b2).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][0], q(1, 1));
        assert_eq!(inv[0][1], q(-1, 1));
        let prod = mat_vec(&inv, &[Rational::from_int(2), Rational::from_int(1)]);
        assert_eq!(prod, vec![Rational::one(), Rational::zero()]);
    }

    #[test]
    fn snf_diagonal_divides() {
        let a: ZMat = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(4), BigInt::from(16)],
        ];
        let (u, s, v) = smith_normal_form(&a);
        // u * a * v == s
        let rows = a.len();
        let cols = a[0].len();
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = BigInt::zero();
                for k in 0..rows {
                    for l in 0..cols {
                        acc += &u[i][k] * &a[k][l] * &v[l][j];
                    }
                }
                assert_eq!(acc, s[i][j]);
            }
        }
        for i in 0..rows.min(cols) - 1 {
            if !s[i + 1][i + 1].is_zero() {
                assert!((&s[i + 1][i + 1] % &s[i][i]).is_zero());
            }
        }
    }

    #[test]
    fn integer_solve() {
        // x + 2y = 5 has integer solutions with a rank-1 kernel.
        let a: ZMat = vec![vec![BigInt::from(1), BigInt::from(2)]];
        let (p, basis) = solve_integer(&a, &[BigInt::from(5)]).unwrap();
        assert_eq!(&p[0] + BigInt::from(2) * &p[1], BigInt::from(5));
        assert_eq!(basis.len(), 1);
        assert_eq!(&basis[0][0] + BigInt::from(2) * &basis[0][1], BigInt::zero());
        // 2x = 3 has none.
        let a: ZMat = vec![vec![BigInt::from(2)]];
        assert!(solve_integer(&a, &[BigInt::from(3)]).is_none());
    }

    #[test]
    fn fm_feasibility_and_enumeration() {
        // 0 < x < 3, 0 < y < 2, x + y <= 3 (strict box, weak diagonal).
        let cons = vec![
            Constraint::new(vec![q(-1, 1), q(0, 1)], q(0, 1), true),
            Constraint::new(vec![q(1, 1), q(0, 1)], q(3, 1), true),
            Constraint::new(vec![q(0, 1), q(-1, 1)], q(0, 1), true),
            Constraint::new(vec![q(0, 1), q(1, 1)], q(2, 1), true),
            Constraint::new(vec![q(1, 1), q(1, 1)], q(3, 1), false),
        ];
        assert!(feasible(&cons, 2));
        let pts = integer_points(&cons, 2).unwrap();
        assert_eq!(pts, vec![vec![BigInt::from(1), BigInt::from(1)], vec![BigInt::from(2), BigInt::from(1)]]);
        // Infeasible strict pair.
        let cons = vec![
            Constraint::new(vec![q(1, 1)], q(0, 1), true),
            Constraint::new(vec![q(-1, 1)], q(0, 1), false),
        ];
        assert!(!feasible(&cons, 1));
    }
}
