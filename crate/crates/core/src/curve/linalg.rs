use super::Q3;

/// Basis of the right null space of `rows` (each of length `ncols`), by
/// exact Gauss-Jordan elimination.
pub fn nullspace(rows: &[Vec<Q3>], ncols: usize) -> Vec<Vec<Q3>> {
    let mut m: Vec<Vec<Q3>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].inv().expect("pivot is nonzero");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Q3::zero(); ncols];
            v[fc] = Q3::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[row][fc];
            }
            v
        })
        .collect()
}
