//! Delay-Doppler scenes: coherent superposition of shifted ambiguity
//! responses of point targets, and weak-target visibility margins.
//!
//! Targets snap to the nearest grid θ and to integer delay bins. Doppler
//! offsets wrap modulo 2π; delay shifts that leave the map are dropped.

use num_complex::Complex;

use crate::ambiguity::{dary_values, AmbiguityMap, DopplerGrid};
use crate::designs::PulseTrain;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use crate::spectra::magnitude_db;
use crate::waveforms::ComplementarySet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointTarget<T> {
    pub delay_bin: i64,
    pub theta: T,
    /// Power relative to a 0 dB reference reflector.
    pub power_db: T,
}

impl<T: Real> PointTarget<T> {
    pub fn new(delay_bin: i64, theta: T, power_db: T) -> Self {
        Self {
            delay_bin,
            theta,
            power_db,
        }
    }

    /// Real, positive amplitude `10^{dB/20}`.
    pub fn amplitude(&self) -> T {
        T::from_f64_lossy(10f64).powf(self.power_db / T::from_f64_lossy(20.0))
    }
}

/// Targets seen through one `(P, Q)` design and one complementary waveform set.
#[derive(Clone, Debug)]
pub struct Scene<T> {
    targets: Vec<PointTarget<T>>,
    columns: Vec<usize>,
    train: PulseTrain<T>,
    set: ComplementarySet,
    grid: DopplerGrid<T>,
}

impl<T: Real> Scene<T> {
    pub fn new(
        targets: Vec<PointTarget<T>>,
        train: PulseTrain<T>,
        set: ComplementarySet,
        grid: DopplerGrid<T>,
    ) -> Result<Self> {
        if targets.is_empty() {
            return invalid("scene needs at least one target");
        }
        if train.alphabet() != set.size() {
            return invalid(format!(
                "train has D = {} but the waveform set has {} members",
                train.alphabet(),
                set.size()
            ));
        }
        let l = set.chip_len() as i64;
        let mut columns = Vec::with_capacity(targets.len());
        for (i, t) in targets.iter().enumerate() {
            if t.delay_bin <= -l || t.delay_bin >= l {
                return invalid(format!(
                    "target {i} delay {} is outside ±{}",
                    t.delay_bin,
                    l - 1
                ));
            }
            if !grid.contains(t.theta) {
                return invalid(format!("target {i} Doppler lies outside the grid"));
            }
            if !t.power_db.is_finite() {
                return invalid(format!("target {i} power is not finite"));
            }
            columns.push(grid.nearest(t.theta));
        }
        Ok(Self {
            targets,
            columns,
            train,
            set,
            grid,
        })
    }

    pub fn targets(&self) -> &[PointTarget<T>] {
        &self.targets
    }

    pub fn grid(&self) -> &DopplerGrid<T> {
        &self.grid
    }

    pub fn train(&self) -> &PulseTrain<T> {
        &self.train
    }

    /// Grid θ each target snapped to.
    pub fn snapped_theta(&self, i: usize) -> T {
        self.grid.thetas()[self.columns[i]]
    }

    /// Response of target `i` alone, amplitude included.
    fn contribution(&self, i: usize) -> Vec<Complex<T>> {
        let pi = T::PI();
        let tau = pi + pi;
        let ti = self.snapped_theta(i);
        let shifted: Vec<T> = self
            .grid
            .thetas()
            .iter()
            .map(|&t| {
                let mut d = t - ti;
                if d >= pi {
                    d -= tau;
                } else if d < -pi {
                    d += tau;
                }
                d
            })
            .collect();
        let chi = dary_values(&self.train, &self.set, &shifted);
        let (l, w) = (self.set.chip_len() as i64, self.grid.len());
        let amp = self.targets[i].amplitude();
        let mut out = vec![Complex::new(T::zero(), T::zero()); chi.len()];
        for k in -(l - 1)..l {
            let src = k - self.targets[i].delay_bin;
            if src <= -l || src >= l {
                continue;
            }
            let (dst_row, src_row) = ((k + l - 1) as usize * w, (src + l - 1) as usize * w);
            for t in 0..w {
                out[dst_row + t] = chi[src_row + t] * amp;
            }
        }
        out
    }

    fn sum_of(&self, pick: impl Fn(usize) -> bool) -> Vec<Complex<T>> {
        let bins = 2 * self.set.chip_len() - 1;
        let mut acc = vec![Complex::new(T::zero(), T::zero()); bins * self.grid.len()];
        for i in (0..self.targets.len()).filter(|&i| pick(i)) {
            for (a, v) in acc.iter_mut().zip(self.contribution(i)) {
                *a += v;
            }
        }
        acc
    }

    fn reference(&self) -> T {
        T::from_usize_lossy(self.set.chip_len()) * self.train.q_sum()
    }
}

/// Coherent sum of every target's response, quoted against a 0 dB target's peak.
pub fn render_scene_linear<T: Real>(scene: &Scene<T>) -> AmbiguityMap<T> {
    AmbiguityMap::from_parts(
        scene.set.chip_len(),
        scene.grid.clone(),
        scene.sum_of(|_| true),
        scene.reference(),
    )
}

/// [`render_scene_linear`] normalized so the strongest cell reads 0 dB.
pub fn render_scene<T: Real>(scene: &Scene<T>) -> AmbiguityMap<T> {
    let values = scene.sum_of(|_| true);
    let peak = values
        .iter()
        .map(|v| v.norm())
        .fold(T::zero(), |a, b| a.max(b));
    let peak = if peak > T::zero() { peak } else { T::one() };
    AmbiguityMap::from_parts(scene.set.chip_len(), scene.grid.clone(), values, peak)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetVisibility {
    pub index: usize,
    /// Target peak in dB relative to the 0 dB reference.
    pub peak_db: f64,
    /// Strongest interference from the other targets in the target's θ column.
    pub interference_db: f64,
    /// `peak_db − interference_db`; `+∞` when nothing interferes.
    pub margin_db: f64,
}

/// Margins for the targets whose snapped θ lies in `[lo, hi]`.
///
/// Interference is the coherent sum of all other targets in the target's θ
/// column, maximised over delay bins except the other targets' own delay rows,
/// which hold their Doppler-spread mainlobes rather than range sidelobes.
pub fn visibility_report<T: Real>(scene: &Scene<T>, lo: T, hi: T) -> Result<Vec<TargetVisibility>> {
    if !(lo <= hi) {
        return invalid("visibility band is empty");
    }
    if !scene.grid.thetas().iter().any(|&t| t >= lo && t <= hi) {
        return invalid("visibility band contains no grid points");
    }
    let reference = scene.reference().to_f64().unwrap_or(f64::NAN);
    let (l, w) = (scene.set.chip_len() as i64, scene.grid.len());
    let mut report = Vec::new();
    for i in 0..scene.targets.len() {
        let theta = scene.snapped_theta(i);
        if theta < lo || theta > hi {
            continue;
        }
        let t = scene.columns[i];
        let others = scene.sum_of(|j| j != i);
        let mainlobe_rows: Vec<i64> = (0..scene.targets.len())
            .filter(|&j| j != i)
            .map(|j| scene.targets[j].delay_bin)
            .collect();
        let worst = (-(l - 1)..l)
            .filter(|k| !mainlobe_rows.contains(k))
            .map(|k| others[(k + l - 1) as usize * w + t].norm())
            .fold(T::zero(), |a, b| a.max(b))
            .to_f64()
            .ok_or_else(|| Error::InvalidArgument("non-finite interference".into()))?;
        let peak = scene.targets[i].amplitude().to_f64().unwrap_or(f64::NAN);
        let peak_db = 20.0 * peak.log10();
        let (interference_db, margin_db) = if worst > 0.0 {
            let db = 20.0 * (worst / reference).log10();
            (db, peak_db - db)
        } else {
            (magnitude_db(0.0), f64::INFINITY)
        };
        report.push(TargetVisibility {
            index: i,
            peak_db,
            interference_db,
            margin_db,
        });
    }
    Ok(report)
}

/// One target per line, `delay_bin theta_rad power_db`; `#` starts a comment.
pub fn parse_scene_targets<T: Real>(text: &str) -> Result<Vec<PointTarget<T>>> {
    let mut targets = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [k, theta, db] = fields[..] else {
            return Err(Error::Parse(format!(
                "line {}: expected `delay_bin theta_rad power_db`",
                no + 1
            )));
        };
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", no + 1));
        targets.push(PointTarget::new(
            k.parse().map_err(|_| bad("delay bin"))?,
            T::from_f64_lossy(theta.parse().map_err(|_| bad("theta"))?),
            T::from_f64_lossy(db.parse().map_err(|_| bad("power"))?),
        ));
    }
    if targets.is_empty() {
        return Err(Error::Parse("scene file has no targets".into()));
    }
    Ok(targets)
}

pub fn scene_targets_to_text<T: Real>(targets: &[PointTarget<T>]) -> String {
    let mut out = String::from("# delay_bin theta_rad power_db\n");
    for t in targets {
        out.push_str(&format!(
            "{} {} {}\n",
            t.delay_bin,
            t.theta.to_f64().unwrap_or(f64::NAN),
            t.power_db.to_f64().unwrap_or(f64::NAN)
        ));
    }
    out
}

/// Three equal 0 dB reflectors at zero Doppler and two −30 dB slow movers.
pub fn demo_targets<T: Real>() -> Vec<PointTarget<T>> {
    let f = T::from_f64_lossy;
    vec![
        PointTarget::new(-30, f(0.0), f(0.0)),
        PointTarget::new(0, f(0.0), f(0.0)),
        PointTarget::new(20, f(0.0), f(0.0)),
        PointTarget::new(8, f(0.06), f(-30.0)),
        PointTarget::new(-15, f(-0.08), f(-30.0)),
    ]
}
