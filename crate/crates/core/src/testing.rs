//! Test-only enumeration helpers, independent of the library's oracles.

/// Every Hamilton cycle of `K_n` as a canonical vertex order (starts at 0,
/// second vertex smaller than the last), in lexicographic order.
pub(crate) fn all_canonical_orders(n: usize) -> Vec<Vec<usize>> {
    fn rec(path: &mut Vec<usize>, used: &mut [bool], n: usize, out: &mut Vec<Vec<usize>>) {
        if path.len() == n {
            if path[1] < path[n - 1] {
                out.push(path.clone());
            }
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                rec(path, used, n, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    rec(&mut vec![0], &mut used, n, &mut out);
    out
}
