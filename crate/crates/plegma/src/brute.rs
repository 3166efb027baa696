//! Filter-all-tuples enumeration, kept independent of the backtracking
//! enumerator for cross-checks.

pub fn k_subsets(m: &[u64], k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (p, &x) in m.iter().enumerate() {
        for mut rest in k_subsets(&m[p + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

// Straight from the definition, no shortcuts.
pub fn is_plegma(rows: &[Vec<u64>], strict: bool) -> bool {
    let (l, k) = (rows.len(), rows[0].len());
    for i1 in 0..l {
        for i2 in 0..l {
            for j1 in 0..k {
                for j2 in j1 + 1..k {
                    if rows[i1][j1] >= rows[i2][j2] {
                        return false;
                    }
                }
            }
            if i1 < i2 {
                for j in 0..k {
                    if rows[i1][j] > rows[i2][j] || (strict && rows[i1][j] == rows[i2][j]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn brute_families(m: &[u64], l: usize, k: usize, strict: bool) -> Vec<Vec<Vec<u64>>> {
    let subs = k_subsets(m, k);
    let mut tuples: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for _ in 0..l {
        tuples = tuples
            .into_iter()
            .flat_map(|t| subs.iter().map(move |s| {
                let mut t = t.clone();
                t.push(s.clone());
                t
            }))
            .collect();
    }
    tuples.retain(|t| is_plegma(t, strict));
    tuples.sort_by_key(|t| t.concat());
    tuples
}
