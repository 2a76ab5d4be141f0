//! Small numeric helpers shared by the rankers and the evaluator.

/// Variance floor applied wherever a variance appears in a denominator.
pub const EPSILON: f64 = 1e-12;

/// Sums values after sorting them, so the result depends only on the
/// multiset of inputs and not on their order. Rankings must be invariant
/// under row permutations of the dataset; plain left-to-right summation
/// is not, because float addition does not associate.
pub fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Mean via order-independent summation.
pub fn stable_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    stable_sum(values.iter().copied()) / values.len() as f64
}

/// (mean, population variance) in one pass over sorted accumulations.
pub fn mean_and_pop_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let m = stable_mean(values);
    let ss = stable_sum(values.iter().map(|&x| (x - m) * (x - m)));
    (m, ss / n)
}

/// (mean, sample variance) with the n-1 denominator.
pub fn mean_and_sample_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let m = stable_mean(values);
    let ss = stable_sum(values.iter().map(|&x| (x - m) * (x - m)));
    (
        m,
        if values.len() > 1 {
            ss / (n - 1.0)
        } else {
            0.0
        },
    )
}

/// Midranks (1-based, ties averaged).
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share the average rank
        let r = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Sizes of the tie groups in `values`.
pub fn tie_group_sizes(values: &[f64]) -> Vec<usize> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sizes = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        sizes.push(j - i + 1);
        i = j + 1;
    }
    sizes
}

/// |Pearson correlation|-friendly covariance pieces from raw moments.
/// Returns (cov, var_x, var_y), population convention.
pub fn cov_var(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = stable_mean(x);
    let my = stable_mean(y);
    let cov = stable_sum(x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my))) / n;
    let vx = stable_sum(x.iter().map(|&a| (a - mx) * (a - mx))) / n;
    let vy = stable_sum(y.iter().map(|&b| (b - my) * (b - my))) / n;
    (cov, vx, vy)
}

/// Pearson correlation; 0 when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (cov, vx, vy) = cov_var(x, y);
    if vx <= 0.0 || vy <= 0.0 {
        return 0.0;
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Spearman rank correlation with midrank ties; 0 for constant inputs.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&midranks(x), &midranks(y))
}

/// Binomial coefficient as u64; callers keep d small enough not to overflow.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}
