use crate::error::{Error, Result};
use crate::field::Field;
use crate::linsys::{system_on_subspaces, LinearSystem};
use crate::par::Exec;
use crate::proj::{span, ProjPoint, ProjSubspace};

use super::map::RationalMap;

/// All k-element subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Degree-g forms on P^{2g-2} vanishing on every span of g-1 of the 2g
/// points, and the map they define.
pub fn forgetful_h_n<F: Field>(
    field: &F,
    n_points: &[ProjPoint<F>],
    exec: Exec,
) -> Result<(LinearSystem<F>, RationalMap<F>)> {
    let n = n_points.first().ok_or(Error::EmptyInput("no points"))?.ambient();
    if n_points.len() != n + 2 || n % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: n + 2, found: n_points.len() });
    }
    let g = n / 2 + 1;
    let spans: Vec<ProjSubspace<F>> = subsets(2 * g, g - 1)
        .iter()
        .map(|s| span(field, &s.iter().map(|&i| n_points[i].clone()).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let system = system_on_subspaces(field, n, g, &spans, exec)?;
    if system.is_empty() {
        return Err(Error::Degenerate("no forms through the secant spans".into()));
    }
    let map = RationalMap::from_system(field, &system)?;
    Ok((system, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(6, 2).len(), 15);
        assert_eq!(subsets(8, 3).len(), 56);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
