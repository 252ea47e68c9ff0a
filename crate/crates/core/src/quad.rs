//! Adaptive one- and two-dimensional quadrature.
//!
//! Everything here is built on a globally adaptive 21-point Gauss–Kronrod
//! scheme: the panel with the largest error estimate is bisected until the
//! summed error meets `max(rel_tol * |value|, abs_tol)` or the evaluation
//! budget runs out. Semi-infinite ranges are mapped onto `[0, 1)` with
//! `x = origin + scale * u / (1 - u)`, so `scale` should be the length over
//! which the integrand decays. Oscillatory integrands can be pre-split into
//! panels of roughly one period, which keeps the bisection from chasing
//! individual oscillations one at a time.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and evaluation budget for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl QuadSpec {
    /// Defaults used for influence phases, whose errors enter exponentially.
    pub const PHASES: QuadSpec = QuadSpec {
        rel_tol: 1e-9,
        abs_tol: 1e-15,
        max_evals: 4_000_000,
    };

    /// Defaults used for decay-rate integrals.
    pub const RATES: QuadSpec = QuadSpec {
        rel_tol: 1e-7,
        abs_tol: 1e-15,
        max_evals: 4_000_000,
    };

    pub fn new(rel_tol: f64, abs_tol: f64, max_evals: usize) -> Result<Self> {
        let spec = QuadSpec {
            rel_tol,
            abs_tol,
            max_evals,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        QuadSpec { rel_tol, ..self }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadSpec { abs_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_evals == 0 {
            return Err(Error::invalid("max_evals must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec::RATES
    }
}

/// An integral value with its error estimate and the number of integrand calls spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_048_759,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const EVALS_PER_PANEL: usize = 21;
const MAX_OSCILLATION_PANELS: usize = 512;
const TAIL_CUT_SCALES: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    Linear,
    Tail { origin: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[inline]
fn mapped<F: FnMut(f64) -> f64>(f: &mut F, map: Map, u: f64) -> f64 {
    match map {
        Map::Linear => f(u),
        Map::Tail { origin, scale } => {
            let d = 1.0 - u;
            let v = f(origin + scale * u / d);
            if v == 0.0 {
                0.0
            } else {
                v * scale / (d * d)
            }
        }
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, map: Map, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let abs_half = half.abs();

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    let fc = mapped(f, map, center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();

    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = mapped(f, map, center - dx);
        let f2 = mapped(f, map, center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += wg * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = mapped(f, map, center - dx);
        let f2 = mapped(f, map, center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Panel {
        lo,
        hi,
        map,
        value,
        error,
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    initial: &[(f64, f64, Map)],
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let mut heap = BinaryHeap::with_capacity(initial.len() * 4);
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evals = 0;

    let failure = |heap: &BinaryHeap<Panel>, frozen: &[Panel], evals: usize| {
        let panels = heap.iter().chain(frozen.iter());
        Error::QuadratureFailure {
            estimate: neumaier_sum(panels.clone().map(|p| p.value)),
            error: panels.map(|p| p.error).sum(),
            evals,
        }
    };

    for &(lo, hi, map) in initial {
        let p = gauss_kronrod(&mut f, map, lo, hi);
        evals += EVALS_PER_PANEL;
        if !(p.value.is_finite() && p.error.is_finite()) {
            return Err(Error::QuadratureFailure {
                estimate: f64::NAN,
                error: f64::INFINITY,
                evals,
            });
        }
        heap.push(p);
    }

    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.error).sum();
    let mut since_resum = 0;

    loop {
        if err <= spec.target(total) {
            // Running sums drift; confirm against a fresh summation.
            total = neumaier_sum(heap.iter().chain(frozen.iter()).map(|p| p.value));
            err = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
            if err <= spec.target(total) {
                break;
            }
        }
        if evals + 2 * EVALS_PER_PANEL > spec.max_evals {
            return Err(failure(&heap, &frozen, evals));
        }
        let Some(worst) = heap.pop() else {
            return Err(failure(&heap, &frozen, evals));
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            frozen.push(worst);
            continue;
        }
        let left = gauss_kronrod(&mut f, worst.map, worst.lo, mid);
        let right = gauss_kronrod(&mut f, worst.map, mid, worst.hi);
        evals += 2 * EVALS_PER_PANEL;
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::QuadratureFailure {
                estimate: f64::NAN,
                error: f64::INFINITY,
                evals,
            });
        }
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        since_resum += 1;
        if since_resum == 64 {
            since_resum = 0;
            total = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
            err = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
        }
    }

    Ok(Estimate {
        value: total,
        error: err,
        evals,
    })
}

fn linear_panels(a: f64, b: f64, count: usize) -> Vec<(f64, f64, Map)> {
    let width = (b - a) / count as f64;
    (0..count)
        .map(|k| {
            let lo = a + width * k as f64;
            let hi = if k + 1 == count {
                b
            } else {
                a + width * (k + 1) as f64
            };
            (lo, hi, Map::Linear)
        })
        .collect()
}

fn panel_count(length: f64, period: Option<f64>) -> usize {
    match period {
        Some(p) if p.is_finite() && p > 0.0 => {
            let n = (length / p).ceil();
            if n.is_finite() {
                (n as usize).clamp(1, MAX_OSCILLATION_PANELS)
            } else {
                MAX_OSCILLATION_PANELS
            }
        }
        _ => 1,
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    integrate_oscillatory(f, a, b, None, spec)
}

/// Integrates `f` over `[a, b]`, pre-splitting into panels one `period` wide.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    period: Option<f64>,
    spec: &QuadSpec,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("finite interval endpoints required"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = linear_panels(lo, hi, panel_count(hi - lo, period));
    let est = adaptive(f, &panels, spec)?;
    Ok(Estimate {
        value: sign * est.value,
        ..est
    })
}

/// Integrates `f` over `[0, ∞)`.
///
/// `decay_scale` sets the mapping `x = decay_scale * u / (1 - u)` and should
/// be where the integrand lives (the cutoff frequency for spectral densities).
/// With a `period_hint` the range up to `40 * decay_scale` is split into panels
/// about one period wide and only the remainder is mapped.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    f: F,
    spec: &QuadSpec,
    decay_scale: f64,
    period_hint: Option<f64>,
) -> Result<Estimate> {
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::invalid(format!(
            "decay_scale must be > 0, got {decay_scale}"
        )));
    }
    let panels = match period_hint {
        Some(p) if p.is_finite() && p > 0.0 => {
            let cut = TAIL_CUT_SCALES * decay_scale;
            let mut panels = linear_panels(0.0, cut, panel_count(cut, Some(p)));
            panels.push((
                0.0,
                1.0,
                Map::Tail {
                    origin: cut,
                    scale: decay_scale,
                },
            ));
            panels
        }
        _ => vec![(
            0.0,
            1.0,
            Map::Tail {
                origin: 0.0,
                scale: decay_scale,
            },
        )],
    };
    adaptive(f, &panels, spec)
}

/// Integrates `f(t, t')` over the triangle `0 <= t' <= t <= tau` by iterated
/// adaptive quadrature (outer `t`, inner `t'`).
pub fn integrate_triangle<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    tau: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("tau must be > 0, got {tau}")));
    }
    spec.validate()?;
    let inner_spec = QuadSpec {
        rel_tol: (0.1 * spec.rel_tol).max(4.0 * f64::EPSILON),
        abs_tol: 0.1 * spec.abs_tol / tau,
        max_evals: spec.max_evals,
    };
    let mut inner_evals = 0usize;
    let mut worst_inner = 0.0f64;
    let mut inner_failure: Option<Error> = None;

    let outer = integrate(
        |t| {
            if inner_failure.is_some() {
                return 0.0;
            }
            match integrate(|tp| f(t, tp), 0.0, t, &inner_spec) {
                Ok(e) => {
                    inner_evals += e.evals;
                    worst_inner = worst_inner.max(e.error);
                    e.value
                }
                Err(e) => {
                    inner_failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        tau,
        spec,
    );
    if let Some(e) = inner_failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(Estimate {
        value: outer.value,
        error: outer.error + tau * worst_inner,
        evals: outer.evals + inner_evals,
    })
}

/// Integrates `g(t')` over the same triangle when the integrand does not
/// depend on `t`, using `∫₀^τ dt ∫₀^t dt' g(t') = ∫₀^τ (τ - t') g(t') dt'`.
pub fn reduce_triangle<G: FnMut(f64) -> f64>(g: G, tau: f64, spec: &QuadSpec) -> Result<Estimate> {
    reduce_triangle_oscillatory(g, tau, None, spec)
}

/// [`reduce_triangle`] with panel splitting at `period`.
pub fn reduce_triangle_oscillatory<G: FnMut(f64) -> f64>(
    mut g: G,
    tau: f64,
    period: Option<f64>,
    spec: &QuadSpec,
) -> Result<Estimate> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("tau must be > 0, got {tau}")));
    }
    integrate_oscillatory(|tp| (tau - tp) * g(tp), 0.0, tau, period, spec)
}

/// Runs `run` on an infallible wrapper around `f`; the first error raised by
/// `f` aborts the integral and is returned instead of the quadrature result.
pub(crate) fn fallible<F, R>(mut f: F, run: R) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
    R: FnOnce(&mut dyn FnMut(f64) -> f64) -> Result<Estimate>,
{
    let mut failure = None;
    let out = {
        let mut wrapped = |x: f64| {
            if failure.is_some() {
                return 0.0;
            }
            match f(x) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        };
        run(&mut wrapped)
    };
    match failure {
        Some(e) => Err(e),
        None => out,
    }
}
