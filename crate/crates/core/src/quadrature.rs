use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_m`.
pub(crate) fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_m(x), p0 = P_{m-1}(x)
            dp = mf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule with a fixed number of nodes per panel.
pub(crate) struct CompositeRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    pub(crate) fn new(nodes_per_panel: usize) -> Self {
        let (nodes, weights) = gauss_legendre(nodes_per_panel);
        CompositeRule { nodes, weights }
    }

    pub(crate) fn nodes_per_panel(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_lo^hi f` over `panels` equal panels.
    pub(crate) fn integrate<F: Fn(f64) -> Complex64>(
        &self,
        f: &F,
        lo: f64,
        hi: f64,
        panels: usize,
    ) -> Complex64 {
        let width = (hi - lo) / panels as f64;
        let half = 0.5 * width;
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * width;
            let mut panel = Complex64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                panel += f(mid + half * x) * *w;
            }
            total += panel * half;
        }
        total
    }
}
