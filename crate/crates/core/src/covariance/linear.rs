use crate::scalar::Scalar;

/// Reduced row echelon form of a system `sum a_i u_i + r = 0`, each row
/// holding the coefficients followed by `r`.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// Pivot column of each reduced row.
    pub pivots: Vec<usize>,
    /// Pivot rows in reduced form, each pivot scaled to 1.
    pub rows: Vec<Vec<Scalar>>,
    /// Constant parts of the rows whose coefficients all vanished, as
    /// fraction-free minors.
    pub residuals: Vec<Scalar>,
}

impl Elimination {
    /// `u_c` in terms of the constant column and the non-pivot unknowns,
    /// which are returned as `(column, coefficient)`; `None` if `c` is free.
    pub fn solved(&self, c: usize) -> Option<(Scalar, Vec<(usize, Scalar)>)> {
        let i = self.pivots.iter().position(|&p| p == c)?;
        let row = &self.rows[i];
        let n = row.len() - 1;
        let free = (0..n)
            .filter(|j| *j != c && !self.pivots.contains(j) && !row[*j].is_zero())
            .map(|j| (j, -&row[j]))
            .collect();
        Some((-&row[n], free))
    }
}

fn weight(s: &Scalar) -> usize {
    s.num().len() + s.den().len()
}

/// Fraction-free (Bareiss) elimination to echelon form, then back
/// substitution on the pivot rows. Every entry below the pivots stays a
/// minor of the input, so the residuals are the raw consistency conditions
/// rather than those conditions divided by pivots that might vanish on a
/// special parameter locus. Among the candidate pivots of a column the
/// sparsest one is taken.
pub fn eliminate(rows: &[Vec<Scalar>], ncols: usize) -> Elimination {
    let mut a: Vec<Vec<Scalar>> = rows.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    for r in &a {
        assert_eq!(r.len(), ncols + 1, "row width must be ncols + 1");
    }
    let mut pivots = Vec::new();
    let mut prev = Scalar::one();
    let mut done = 0;
    for col in 0..ncols {
        let Some(best) = (done..a.len()).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| weight(&a[i][col])) else {
            continue;
        };
        a.swap(done, best);
        let (top, rest) = a.split_at_mut(done + 1);
        let prow = &top[done];
        let piv = &prow[col];
        for row in rest.iter_mut() {
            let f = std::mem::replace(&mut row[col], Scalar::zero());
            for j in col + 1..=ncols {
                let cross = &(piv * &row[j]) - &(&f * &prow[j]);
                row[j] = &cross / &prev;
            }
        }
        prev = piv.clone();
        pivots.push(col);
        done += 1;
    }
    let residuals = a[done..].iter().map(|r| r[ncols].clone()).filter(|c| !c.is_zero()).collect();
    a.truncate(done);
    let rows = back_substitute(a, &pivots);
    Elimination { rank: done, pivots, rows, residuals }
}

/// Scales each pivot to 1 and clears the entries above it.
fn back_substitute(mut a: Vec<Vec<Scalar>>, pivots: &[usize]) -> Vec<Vec<Scalar>> {
    for (k, &col) in pivots.iter().enumerate().rev() {
        let inv = a[k][col].inv().expect("nonzero pivot");
        let prow: Vec<Scalar> = a[k].iter().map(|c| c * &inv).collect();
        for row in a[..k].iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (slot, pc) in row.iter_mut().zip(&prow) {
                if !pc.is_zero() {
                    *slot = &*slot - &(&f * pc);
                }
            }
        }
        a[k] = prow;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn two_by_two() {
        // u + v - 3 = 0, u - v - 1 = 0
        let e = eliminate(&[vec![s(1), s(1), s(-3)], vec![s(1), s(-1), s(-1)]], 2);
        assert_eq!(e.rank, 2);
        assert_eq!(e.solved(0).unwrap().0, s(2));
        assert_eq!(e.solved(1).unwrap().0, s(1));
    }

    #[test]
    fn dependent_rows_leave_a_free_unknown() {
        let q = Scalar::q();
        let e = eliminate(&[vec![q.clone(), s(1), s(0)], vec![&q * &q, q.clone(), s(0)]], 2);
        assert_eq!(e.rank, 1);
        assert!(e.residuals.is_empty());
        let (c, free) = e.solved(0).unwrap();
        assert!(c.is_zero());
        assert_eq!(free, vec![(1, -&q.inv().unwrap())]);
    }

    #[test]
    fn inconsistent_rows_leave_a_residual() {
        let e = eliminate(&[vec![s(1), s(0)], vec![s(1), s(1)]], 1);
        assert_eq!(e.residuals, vec![s(1)]);
    }
}
