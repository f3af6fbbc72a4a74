//! Min-cost perfect assignment via shortest augmenting paths (cubic time).

/// Solves the square assignment problem for a dense cost matrix.
///
/// Returns `(assignment, total)` where `assignment[row] = col`. Costs must be
/// finite; the matrix must be square and non-empty.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    assert!(n > 0, "empty cost matrix");
    assert!(cost.iter().all(|row| row.len() == n), "cost matrix must be square");

    // job[w] = row assigned to column w; column n is a virtual unassigned slot.
    let mut job: Vec<Option<usize>> = vec![None; n + 1];
    let mut ys = vec![0.0f64; n];
    let mut yt = vec![0.0f64; n + 1];

    for row in 0..n {
        let mut w_curr = n;
        job[w_curr] = Some(row);
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut prv: Vec<Option<usize>> = vec![None; n + 1];
        let mut in_tree = vec![false; n + 1];

        while let Some(r) = job[w_curr] {
            in_tree[w_curr] = true;
            let mut delta = f64::INFINITY;
            let mut w_next = n;
            for w in 0..n {
                if !in_tree[w] {
                    let reduced = cost[r][w] - ys[r] - yt[w];
                    if reduced < min_to[w] {
                        min_to[w] = reduced;
                        prv[w] = Some(w_curr);
                    }
                    if min_to[w] < delta {
                        delta = min_to[w];
                        w_next = w;
                    }
                }
            }
            for w in 0..=n {
                if in_tree[w] {
                    if let Some(r2) = job[w] {
                        ys[r2] += delta;
                    }
                    yt[w] -= delta;
                } else {
                    min_to[w] -= delta;
                }
            }
            w_curr = w_next;
        }

        while w_curr != n {
            let w_prev = prv[w_curr].expect("augmenting path is connected");
            job[w_curr] = job[w_prev];
            w_curr = w_prev;
        }
    }

    let mut assignment = vec![0usize; n];
    let mut total = 0.0;
    for w in 0..n {
        let r = job[w].expect("perfect matching");
        assignment[r] = w;
        total += cost[r][w];
    }
    (assignment, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;
    use rand::Rng;

    /// Factorial brute force, the independent oracle for small sizes.
    pub fn brute_force_assignment(cost: &[Vec<f64>]) -> f64 {
        let n = cost.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let total: f64 = p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
            if total < best {
                best = total;
            }
        });
        best
    }

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn three_by_three_example() {
        let cost = vec![vec![8.0, 5.0, 9.0], vec![4.0, 2.0, 4.0], vec![7.0, 3.0, 8.0]];
        let (assignment, total) = min_cost_assignment(&cost);
        assert_eq!(total, 15.0);
        assert_eq!(assignment, vec![0, 2, 1]);
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        let mut rng = rng_from_seed(31);
        for trial in 0..200 {
            let n = 1 + trial % 7;
            let cost: Vec<Vec<f64>> =
                (0..n).map(|_| (0..n).map(|_| rng.random_range(0.0..10.0)).collect()).collect();
            let (_, fast) = min_cost_assignment(&cost);
            let slow = brute_force_assignment(&cost);
            assert!((fast - slow).abs() < 1e-9, "n={n}: {fast} vs {slow}");
        }
    }
}
