//! Numerical knobs shared by every stage. Lengths marked "fraction" are
//! multiplied by the curve period.

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Grid points per parameter axis for scans.
    pub grid: usize,
    /// Projective points closer than this are the same point.
    pub tol_sep: f64,
    /// A point closer than this to a geodesic lies on it.
    pub tol_on: f64,
    /// Speeds below this are treated as a stop (cusp).
    pub v_min: f64,
    /// Exclusion window around cusps, as a fraction of the period.
    pub delta_cusp: f64,
    /// Geodesic curvatures below this are treated as zero.
    pub tol_kg: f64,
    /// Events of one kind closer than this are merged, as a fraction of the period.
    pub tol_dedup: f64,
    /// Angular tolerance for the genericity checks.
    pub tol_ang: f64,
    /// Probe offset for the local classification tests, as a fraction of the period.
    pub eps: f64,
    /// Bending curvatures used when classifying crossings with inflection geodesics.
    pub kappa_bend: [f64; 3],
    /// Newton iteration cap.
    pub newton_iters: usize,
    /// Residual a refined root must reach.
    pub newton_tol: f64,
    /// Polyline resolution of the brute-force oracle.
    pub oracle_resolution: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid: 1024,
            tol_sep: 1e-8,
            tol_on: 1e-8,
            v_min: 1e-6,
            delta_cusp: 1e-3,
            tol_kg: 1e-8,
            tol_dedup: 1e-6,
            tol_ang: 1e-4,
            eps: 1e-3,
            kappa_bend: [1e-2, 1e-3, 1e-4],
            newton_iters: 50,
            newton_tol: 1e-10,
            oracle_resolution: 100_000,
        }
    }
}

impl Config {
    pub fn delta_cusp_len(&self, period: f64) -> f64 {
        self.delta_cusp * period
    }

    pub fn tol_dedup_len(&self, period: f64) -> f64 {
        self.tol_dedup * period
    }

    pub fn eps_len(&self, period: f64) -> f64 {
        self.eps * period
    }
}
