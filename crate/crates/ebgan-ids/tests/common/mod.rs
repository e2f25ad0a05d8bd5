//! Helpers shared by the integration suites: a seeded RNG, an
//! independently written finite-difference probe and pull-away oracle,
//! a rank-based AUC, synthetic cluster data, and a generator for
//! NSL-KDD-format fixture corpora.
//!
//! Everything here is written from scratch against the public crate
//! API on purpose, so the checks cannot inherit a bug from the code
//! under test.

#![allow(dead_code)] // each integration target uses its own subset

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const FD_STEP: f64 = 1e-5;
pub const FD_TOLERANCE: f64 = 1e-4;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / f64::max(1e-6, f64::max(a.abs(), b.abs()))
}

/// Slope of `f` at `at` by central differences.
pub fn central_difference(f: &mut dyn FnMut(f64) -> f64, at: f64) -> f64 {
    (f(at + FD_STEP) - f(at - FD_STEP)) / (2.0 * FD_STEP)
}

pub fn mean(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn population_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Probability that a positive score outranks a negative one, ties
/// counting half (rank-based AUC).
pub fn ranking_auc(positives: &[f64], negatives: &[f64]) -> f64 {
    assert!(!positives.is_empty() && !negatives.is_empty());
    let mut wins = 0.0;
    for &p in positives {
        for &n in negatives {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    wins / (positives.len() as f64 * negatives.len() as f64)
}

/// Direct transcription of the pull-away definition: the mean of
/// squared cosine similarities over all ordered pairs i ≠ j.
pub fn pull_away_double_loop(rows: &Array2<f64>) -> f64 {
    let n = rows.nrows();
    assert!(n >= 2);
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = rows.row(i);
            let b = rows.row(j);
            let na = a.dot(&a).sqrt();
            let nb = b.dot(&b).sqrt();
            if na == 0.0 || nb == 0.0 {
                continue;
            }
            let cos = a.dot(&b) / (na * nb);
            total += cos * cos;
        }
    }
    total / (n * (n - 1)) as f64
}

/// A Gaussian blob in [0,1]^d around `center` with spread 0.05.
pub fn cluster(rng: &mut ChaCha8Rng, rows: usize, d: usize, center: f64) -> Array2<f64> {
    Array2::from_shape_fn((rows, d), |_| {
        let noise: f64 = StandardNormal.sample(rng);
        (center + 0.05 * noise).clamp(0.0, 1.0)
    })
}

// ---------------------------------------------------------------------------
// NSL-KDD-format fixture corpus
// ---------------------------------------------------------------------------

// Feature positions in a 41-feature record, canonical NSL-KDD order.
const DURATION: usize = 0;
const PROTOCOL: usize = 1;
const SERVICE: usize = 2;
const FLAG: usize = 3;
const SRC_BYTES: usize = 4;
const DST_BYTES: usize = 5;
const HOT: usize = 9;
const NUM_FAILED_LOGINS: usize = 10;
const LOGGED_IN: usize = 11;
const NUM_COMPROMISED: usize = 12;
const ROOT_SHELL: usize = 13;
const NUM_ROOT: usize = 15;
const NUM_FILE_CREATIONS: usize = 16;
const NUM_ACCESS_FILES: usize = 18;
const IS_GUEST_LOGIN: usize = 21;
const COUNT: usize = 22;
const SRV_COUNT: usize = 23;
const SERROR_RATE: usize = 24;
const SRV_SERROR_RATE: usize = 25;
const RERROR_RATE: usize = 26;
const SRV_RERROR_RATE: usize = 27;
const SAME_SRV_RATE: usize = 28;
const DIFF_SRV_RATE: usize = 29;
const SRV_DIFF_HOST_RATE: usize = 30;
const DST_HOST_COUNT: usize = 31;
const DST_HOST_SRV_COUNT: usize = 32;
const DST_HOST_SAME_SRV_RATE: usize = 33;
const DST_HOST_DIFF_SRV_RATE: usize = 34;
const DST_HOST_SAME_SRC_PORT_RATE: usize = 35;
const DST_HOST_SRV_DIFF_HOST_RATE: usize = 36;
const DST_HOST_SERROR_RATE: usize = 37;
const DST_HOST_SRV_SERROR_RATE: usize = 38;
const DST_HOST_RERROR_RATE: usize = 39;
const DST_HOST_SRV_RERROR_RATE: usize = 40;

/// A rate in [lo, hi] with two decimal places, as NSL-KDD prints them.
fn rate(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    let cents = rng.random_range(((lo * 100.0).round() as i64)..=((hi * 100.0).round() as i64));
    format!("{}", cents as f64 / 100.0)
}

fn int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> String {
    rng.random_range(lo..=hi).to_string()
}

fn pick<'a>(rng: &mut ChaCha8Rng, options: &[&'a str]) -> &'a str {
    options[rng.random_range(0..options.len())]
}

fn assemble(fields: Vec<String>, label: &str) -> String {
    assert_eq!(fields.len(), 41);
    let mut line = fields.join(",");
    line.push(',');
    line.push_str(label);
    line
}

fn base_fields() -> Vec<String> {
    vec!["0".to_string(); 41]
}

/// Benign traffic: a mix of tight well-behaved sessions, noisier
/// "busy host" sessions whose values spread across many columns, and a
/// small stressed tail whose error rates and counts drift toward the
/// attack bands without ever matching an attack signature.
pub fn normal_line(rng: &mut ChaCha8Rng) -> String {
    let roll = rng.random_range(0..10);
    if roll == 0 {
        return stressed_normal_line(rng);
    }
    let mut f = base_fields();
    let busy = roll < 4;
    f[PROTOCOL] = pick(rng, &["tcp", "tcp", "tcp", "udp"]).into();
    f[SERVICE] = if busy {
        pick(rng, &["http", "smtp", "ftp_data", "domain_u", "other", "telnet"]).into()
    } else {
        pick(rng, &["http", "http", "smtp", "domain_u"]).into()
    };
    f[FLAG] = pick(rng, &["SF", "SF", "SF", "SF", "REJ"]).into();
    if busy {
        f[DURATION] = int(rng, 0, 900);
        f[SRC_BYTES] = int(rng, 0, 12000);
        f[DST_BYTES] = int(rng, 0, 40000);
        f[HOT] = int(rng, 0, 3);
        f[NUM_FILE_CREATIONS] = int(rng, 0, 2);
        f[NUM_ACCESS_FILES] = int(rng, 0, 1);
        f[IS_GUEST_LOGIN] = int(rng, 0, 1);
        f[COUNT] = int(rng, 1, 60);
        f[SRV_COUNT] = int(rng, 1, 60);
        f[SERROR_RATE] = rate(rng, 0.0, 0.3);
        f[SRV_SERROR_RATE] = rate(rng, 0.0, 0.3);
        f[RERROR_RATE] = rate(rng, 0.0, 0.4);
        f[SRV_RERROR_RATE] = rate(rng, 0.0, 0.4);
        f[SAME_SRV_RATE] = rate(rng, 0.3, 1.0);
        f[DIFF_SRV_RATE] = rate(rng, 0.0, 0.4);
        f[SRV_DIFF_HOST_RATE] = rate(rng, 0.0, 0.6);
        f[DST_HOST_COUNT] = int(rng, 1, 255);
        f[DST_HOST_SRV_COUNT] = int(rng, 1, 255);
        f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.2, 1.0);
        f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.0, 0.5);
        f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.0, 0.8);
        f[DST_HOST_SRV_DIFF_HOST_RATE] = rate(rng, 0.0, 0.5);
        f[DST_HOST_SERROR_RATE] = rate(rng, 0.0, 0.3);
        f[DST_HOST_SRV_SERROR_RATE] = rate(rng, 0.0, 0.3);
        f[DST_HOST_RERROR_RATE] = rate(rng, 0.0, 0.4);
        f[DST_HOST_SRV_RERROR_RATE] = rate(rng, 0.0, 0.4);
    } else {
        f[DURATION] = if rng.random_range(0..5) == 0 {
            int(rng, 1, 120)
        } else {
            "0".into()
        };
        f[SRC_BYTES] = int(rng, 120, 4000);
        f[DST_BYTES] = int(rng, 300, 16000);
        f[COUNT] = int(rng, 1, 25);
        f[SRV_COUNT] = int(rng, 1, 25);
        f[SERROR_RATE] = rate(rng, 0.0, 0.05);
        f[SRV_SERROR_RATE] = rate(rng, 0.0, 0.05);
        f[RERROR_RATE] = rate(rng, 0.0, 0.05);
        f[SRV_RERROR_RATE] = rate(rng, 0.0, 0.05);
        f[SAME_SRV_RATE] = rate(rng, 0.8, 1.0);
        f[DIFF_SRV_RATE] = rate(rng, 0.0, 0.1);
        f[SRV_DIFF_HOST_RATE] = rate(rng, 0.0, 0.2);
        f[DST_HOST_COUNT] = int(rng, 20, 255);
        f[DST_HOST_SRV_COUNT] = int(rng, 20, 255);
        f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.7, 1.0);
        f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.0, 0.1);
        f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.0, 0.2);
        f[DST_HOST_SRV_DIFF_HOST_RATE] = rate(rng, 0.0, 0.1);
        f[DST_HOST_SERROR_RATE] = rate(rng, 0.0, 0.05);
        f[DST_HOST_SRV_SERROR_RATE] = rate(rng, 0.0, 0.05);
        f[DST_HOST_RERROR_RATE] = rate(rng, 0.0, 0.05);
        f[DST_HOST_SRV_RERROR_RATE] = rate(rng, 0.0, 0.05);
    }
    f[LOGGED_IN] = "1".into();
    assemble(f, "normal")
}

/// Benign ICMP echo traffic (monitoring pings): a narrow, highly
/// regular mode. Most columns are pinned to tight bands, which lets an
/// autoencoder learn to reproduce this shape almost exactly — and makes
/// any later deviation from those pinned columns stand out sharply.
pub fn icmp_normal_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = "icmp".into();
    f[SERVICE] = pick(rng, &["eco_i", "ecr_i"]).into();
    f[FLAG] = "SF".into();
    f[SRC_BYTES] = int(rng, 8, 64);
    f[DST_BYTES] = int(rng, 0, 64);
    f[COUNT] = int(rng, 1, 25);
    f[SRV_COUNT] = int(rng, 1, 25);
    f[SAME_SRV_RATE] = rate(rng, 0.95, 1.0);
    f[DIFF_SRV_RATE] = rate(rng, 0.0, 0.05);
    f[SRV_DIFF_HOST_RATE] = rate(rng, 0.0, 0.05);
    f[DST_HOST_COUNT] = int(rng, 20, 255);
    f[DST_HOST_SRV_COUNT] = int(rng, 20, 255);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.9, 1.0);
    f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.0, 0.05);
    f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.9, 1.0);
    f[DST_HOST_SRV_DIFF_HOST_RATE] = rate(rng, 0.0, 0.05);
    assemble(f, "normal")
}

/// A well-behaved host under load: many connections, moderate error
/// rates across the board. Each column stays well inside the benign
/// side of the attack bands, but a dozen columns drift at once, which
/// makes these rows diffusely expensive to reconstruct.
fn stressed_normal_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = pick(rng, &["tcp", "tcp", "udp"]).into();
    f[SERVICE] = pick(rng, &["http", "smtp", "ftp_data", "other", "domain_u"]).into();
    f[FLAG] = pick(rng, &["SF", "SF", "REJ", "RSTO"]).into();
    f[DURATION] = int(rng, 0, 300);
    f[SRC_BYTES] = int(rng, 0, 20000);
    f[DST_BYTES] = int(rng, 0, 60000);
    f[LOGGED_IN] = int(rng, 0, 1);
    f[COUNT] = int(rng, 40, 220);
    f[SRV_COUNT] = int(rng, 10, 120);
    f[SERROR_RATE] = rate(rng, 0.1, 0.45);
    f[SRV_SERROR_RATE] = rate(rng, 0.1, 0.45);
    f[RERROR_RATE] = rate(rng, 0.1, 0.6);
    f[SRV_RERROR_RATE] = rate(rng, 0.1, 0.6);
    f[SAME_SRV_RATE] = rate(rng, 0.2, 0.8);
    f[DIFF_SRV_RATE] = rate(rng, 0.1, 0.5);
    f[SRV_DIFF_HOST_RATE] = rate(rng, 0.1, 0.7);
    f[DST_HOST_COUNT] = int(rng, 80, 255);
    f[DST_HOST_SRV_COUNT] = int(rng, 30, 255);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.2, 0.8);
    f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.1, 0.5);
    f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.1, 0.9);
    f[DST_HOST_SRV_DIFF_HOST_RATE] = rate(rng, 0.1, 0.6);
    f[DST_HOST_SERROR_RATE] = rate(rng, 0.1, 0.45);
    f[DST_HOST_SRV_SERROR_RATE] = rate(rng, 0.1, 0.45);
    f[DST_HOST_RERROR_RATE] = rate(rng, 0.1, 0.6);
    f[DST_HOST_SRV_RERROR_RATE] = rate(rng, 0.1, 0.6);
    assemble(f, "normal")
}

/// Classic SYN flood: the signature lives in the intrinsic and
/// time-based groups (S0 flag, empty payload, very high connection
/// count, near-1 SYN error rates) — exactly the groups the generator
/// must preserve for this class.
fn classic_dos_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = "tcp".into();
    f[SERVICE] = pick(rng, &["private", "private", "http"]).into();
    f[FLAG] = pick(rng, &["S0", "S0", "S0", "RSTO"]).into();
    f[COUNT] = int(rng, 100, 511);
    f[SRV_COUNT] = int(rng, 1, 20);
    f[SERROR_RATE] = rate(rng, 0.9, 1.0);
    f[SRV_SERROR_RATE] = rate(rng, 0.9, 1.0);
    f[SAME_SRV_RATE] = rate(rng, 0.0, 0.15);
    f[DIFF_SRV_RATE] = rate(rng, 0.03, 0.1);
    f[DST_HOST_COUNT] = "255".into();
    f[DST_HOST_SRV_COUNT] = int(rng, 1, 30);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.0, 0.15);
    f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.03, 0.1);
    f[DST_HOST_SERROR_RATE] = rate(rng, 0.9, 1.0);
    f[DST_HOST_SRV_SERROR_RATE] = rate(rng, 0.9, 1.0);
    assemble(f, pick(rng, &["neptune", "neptune", "smurf"]))
}

/// Low-rate flood: the same shape at a fraction of the volume, so each
/// individual column sits much closer to the benign bands.
fn low_rate_dos_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = "tcp".into();
    f[SERVICE] = pick(rng, &["private", "private", "http"]).into();
    f[FLAG] = pick(rng, &["S0", "RSTO", "REJ"]).into();
    f[COUNT] = int(rng, 20, 90);
    f[SRV_COUNT] = int(rng, 1, 10);
    f[SERROR_RATE] = rate(rng, 0.4, 0.75);
    f[SRV_SERROR_RATE] = rate(rng, 0.4, 0.75);
    f[SAME_SRV_RATE] = rate(rng, 0.05, 0.35);
    f[DIFF_SRV_RATE] = rate(rng, 0.05, 0.2);
    f[DST_HOST_COUNT] = int(rng, 120, 255);
    f[DST_HOST_SRV_COUNT] = int(rng, 1, 40);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.05, 0.35);
    f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.05, 0.2);
    f[DST_HOST_SERROR_RATE] = rate(rng, 0.4, 0.75);
    f[DST_HOST_SRV_SERROR_RATE] = rate(rng, 0.4, 0.75);
    assemble(f, pick(rng, &["neptune", "neptune", "smurf"]))
}

/// Denial of service: mostly classic floods with a low-rate minority.
pub fn dos_line(rng: &mut ChaCha8Rng) -> String {
    if rng.random_range(0..10) < 7 {
        classic_dos_line(rng)
    } else {
        low_rate_dos_line(rng)
    }
}

/// A stressed normal as it appears outside the training window: the
/// same diffuse drift, pushed a little further on many columns at once
/// while each column stays near the training bands. Mirrors the
/// benchmark's test-time distribution shift.
fn drifted_normal_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = pick(rng, &["tcp", "tcp", "udp"]).into();
    f[SERVICE] = pick(rng, &["http", "smtp", "ftp_data", "other", "domain_u"]).into();
    f[FLAG] = pick(rng, &["SF", "REJ", "RSTO"]).into();
    f[DURATION] = int(rng, 50, 400);
    f[SRC_BYTES] = int(rng, 2000, 18000);
    f[DST_BYTES] = int(rng, 5000, 55000);
    f[LOGGED_IN] = int(rng, 0, 1);
    f[COUNT] = int(rng, 80, 260);
    f[SRV_COUNT] = int(rng, 30, 110);
    f[SERROR_RATE] = rate(rng, 0.15, 0.5);
    f[SRV_SERROR_RATE] = rate(rng, 0.15, 0.5);
    f[RERROR_RATE] = rate(rng, 0.2, 0.6);
    f[SRV_RERROR_RATE] = rate(rng, 0.2, 0.6);
    f[SAME_SRV_RATE] = rate(rng, 0.2, 0.7);
    f[DIFF_SRV_RATE] = rate(rng, 0.15, 0.5);
    f[SRV_DIFF_HOST_RATE] = rate(rng, 0.2, 0.7);
    f[DST_HOST_COUNT] = int(rng, 120, 255);
    f[DST_HOST_SRV_COUNT] = int(rng, 60, 255);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.2, 0.7);
    f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.15, 0.5);
    f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.2, 0.85);
    f[DST_HOST_SRV_DIFF_HOST_RATE] = rate(rng, 0.2, 0.65);
    f[DST_HOST_SERROR_RATE] = rate(rng, 0.15, 0.5);
    f[DST_HOST_SRV_SERROR_RATE] = rate(rng, 0.15, 0.5);
    f[DST_HOST_RERROR_RATE] = rate(rng, 0.2, 0.6);
    f[DST_HOST_SRV_RERROR_RATE] = rate(rng, 0.2, 0.6);
    assemble(f, "normal")
}

/// An ICMP echo flood as a novel test-time variant. Its base shape is
/// exactly the benign echo mode the detector has learned, so the
/// reconstruction tracks it closely on most columns — but a dozen
/// pinned columns (half-open flag, long duration, reject ratios, and
/// inverted service/port regularity) flip to the far end of their
/// range. The deviation is therefore a handful of near-full-scale
/// spikes rather than a broad drift, and it avoids the SYN-flood axes
/// entirely.
fn burst_dos_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = "icmp".into();
    f[SERVICE] = pick(rng, &["eco_i", "ecr_i"]).into();
    f[FLAG] = "SH".into();
    f[DURATION] = int(rng, 700, 880);
    f[SRC_BYTES] = int(rng, 8, 64);
    f[DST_BYTES] = int(rng, 0, 64);
    f[COUNT] = int(rng, 1, 25);
    f[SRV_COUNT] = int(rng, 1, 25);
    f[RERROR_RATE] = rate(rng, 0.9, 1.0);
    f[SRV_RERROR_RATE] = rate(rng, 0.9, 1.0);
    f[SAME_SRV_RATE] = rate(rng, 0.0, 0.05);
    f[DIFF_SRV_RATE] = rate(rng, 0.0, 0.05);
    f[SRV_DIFF_HOST_RATE] = rate(rng, 0.9, 1.0);
    f[DST_HOST_COUNT] = int(rng, 20, 255);
    f[DST_HOST_SRV_COUNT] = int(rng, 20, 255);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.0, 0.1);
    f[DST_HOST_DIFF_SRV_RATE] = rate(rng, 0.0, 0.05);
    f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.0, 0.05);
    f[DST_HOST_SRV_DIFF_HOST_RATE] = rate(rng, 0.9, 1.0);
    f[DST_HOST_RERROR_RATE] = rate(rng, 0.9, 1.0);
    f[DST_HOST_SRV_RERROR_RATE] = rate(rng, 0.9, 1.0);
    assemble(f, "smurf")
}

/// Port/host sweep: tiny probes to many ports, often rejected.
pub fn probe_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[PROTOCOL] = pick(rng, &["icmp", "tcp"]).into();
    f[SERVICE] = pick(rng, &["eco_i", "private", "other"]).into();
    f[FLAG] = pick(rng, &["SF", "REJ", "RSTR"]).into();
    f[SRC_BYTES] = int(rng, 8, 120);
    f[COUNT] = int(rng, 1, 8);
    f[SRV_COUNT] = int(rng, 1, 8);
    f[RERROR_RATE] = rate(rng, 0.3, 1.0);
    f[SRV_RERROR_RATE] = rate(rng, 0.3, 1.0);
    f[SAME_SRV_RATE] = rate(rng, 0.5, 1.0);
    f[DST_HOST_COUNT] = int(rng, 1, 255);
    f[DST_HOST_SRV_COUNT] = int(rng, 1, 20);
    f[DST_HOST_SAME_SRC_PORT_RATE] = rate(rng, 0.6, 1.0);
    f[DST_HOST_RERROR_RATE] = rate(rng, 0.3, 1.0);
    f[DST_HOST_SRV_RERROR_RATE] = rate(rng, 0.3, 1.0);
    assemble(f, pick(rng, &["ipsweep", "portsweep", "satan"]))
}

/// Privilege escalation in an interactive shell session.
pub fn u2r_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[DURATION] = int(rng, 10, 1500);
    f[PROTOCOL] = "tcp".into();
    f[SERVICE] = pick(rng, &["telnet", "ftp"]).into();
    f[FLAG] = "SF".into();
    f[SRC_BYTES] = int(rng, 200, 3000);
    f[DST_BYTES] = int(rng, 500, 9000);
    f[HOT] = int(rng, 1, 6);
    f[LOGGED_IN] = "1".into();
    f[NUM_COMPROMISED] = int(rng, 0, 2);
    f[ROOT_SHELL] = "1".into();
    f[NUM_ROOT] = int(rng, 1, 6);
    f[NUM_FILE_CREATIONS] = int(rng, 0, 3);
    f[COUNT] = int(rng, 1, 4);
    f[SRV_COUNT] = int(rng, 1, 4);
    f[SAME_SRV_RATE] = "1".into();
    f[DST_HOST_COUNT] = int(rng, 1, 60);
    f[DST_HOST_SRV_COUNT] = int(rng, 1, 60);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.7, 1.0);
    assemble(f, pick(rng, &["buffer_overflow", "rootkit"]))
}

/// Remote-to-local credential guessing.
pub fn r2l_line(rng: &mut ChaCha8Rng) -> String {
    let mut f = base_fields();
    f[DURATION] = int(rng, 0, 60);
    f[PROTOCOL] = "tcp".into();
    f[SERVICE] = pick(rng, &["ftp", "telnet", "imap4"]).into();
    f[FLAG] = pick(rng, &["SF", "RSTO"]).into();
    f[SRC_BYTES] = int(rng, 100, 1500);
    f[DST_BYTES] = int(rng, 100, 2000);
    f[NUM_FAILED_LOGINS] = int(rng, 1, 5);
    f[IS_GUEST_LOGIN] = int(rng, 0, 1);
    f[COUNT] = int(rng, 1, 6);
    f[SRV_COUNT] = int(rng, 1, 6);
    f[SAME_SRV_RATE] = "1".into();
    f[DST_HOST_COUNT] = int(rng, 1, 120);
    f[DST_HOST_SRV_COUNT] = int(rng, 1, 120);
    f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.5, 1.0);
    assemble(f, pick(rng, &["guess_passwd", "warezclient"]))
}

// ---------------------------------------------------------------------------
// Wide-vocabulary corpus: enough distinct categories that the encoded
// width matches a full NSL-KDD training split (38 numeric columns plus
// 3 protocols, 69 services and 11 flags = 121).
// ---------------------------------------------------------------------------

pub const ALL_PROTOCOLS: [&str; 3] = ["tcp", "udp", "icmp"];

pub const ALL_FLAGS: [&str; 11] = [
    "SF", "S0", "S1", "S2", "S3", "REJ", "RSTO", "RSTR", "RSTOS0", "SH", "OTH",
];

pub const ALL_SERVICES: [&str; 69] = [
    "aol",
    "auth",
    "bgp",
    "courier",
    "csnet_ns",
    "ctf",
    "daytime",
    "discard",
    "domain",
    "domain_u",
    "echo",
    "eco_i",
    "ecr_i",
    "efs",
    "exec",
    "finger",
    "ftp",
    "ftp_data",
    "gopher",
    "harvest",
    "hostnames",
    "http",
    "http_2784",
    "http_443",
    "http_8001",
    "imap4",
    "IRC",
    "iso_tsap",
    "klogin",
    "kshell",
    "ldap",
    "link",
    "login",
    "mtp",
    "name",
    "netbios_dgm",
    "netbios_ns",
    "netbios_ssn",
    "netstat",
    "nnsp",
    "nntp",
    "ntp_u",
    "other",
    "pm_dump",
    "pop_2",
    "pop_3",
    "printer",
    "private",
    "red_i",
    "remote_job",
    "rje",
    "shell",
    "smtp",
    "sql_net",
    "ssh",
    "sunrpc",
    "supdup",
    "systat",
    "telnet",
    "tftp_u",
    "tim_i",
    "time",
    "urh_i",
    "urp_i",
    "uucp",
    "uucp_path",
    "vmnet",
    "whois",
    "X11",
];

/// One benign line per service, cycling protocols and flags, so a
/// training split built on top of these sees every category value.
pub fn coverage_lines(rng: &mut ChaCha8Rng) -> Vec<String> {
    ALL_SERVICES
        .iter()
        .enumerate()
        .map(|(i, service)| {
            let mut f = base_fields();
            f[PROTOCOL] = ALL_PROTOCOLS[i % ALL_PROTOCOLS.len()].into();
            f[SERVICE] = (*service).into();
            f[FLAG] = ALL_FLAGS[i % ALL_FLAGS.len()].into();
            f[SRC_BYTES] = int(rng, 0, 2000);
            f[DST_BYTES] = int(rng, 0, 4000);
            f[COUNT] = int(rng, 1, 30);
            f[SRV_COUNT] = int(rng, 1, 30);
            f[SAME_SRV_RATE] = rate(rng, 0.5, 1.0);
            f[DST_HOST_COUNT] = int(rng, 1, 255);
            f[DST_HOST_SRV_COUNT] = int(rng, 1, 255);
            f[DST_HOST_SAME_SRV_RATE] = rate(rng, 0.5, 1.0);
            assemble(f, "normal")
        })
        .collect()
}

/// Training split text: pattern normals, one coverage line per service,
/// then classic denial-of-service floods.
pub fn wide_train_corpus(rng: &mut ChaCha8Rng, normals: usize, dos: usize) -> String {
    let mut lines = Vec::with_capacity(normals + ALL_SERVICES.len() + dos);
    for i in 0..normals {
        if i % 9 == 0 {
            lines.push(icmp_normal_line(rng));
        } else {
            lines.push(normal_line(rng));
        }
    }
    lines.extend(coverage_lines(rng));
    for _ in 0..dos {
        lines.push(classic_dos_line(rng));
    }
    lines.join("\n") + "\n"
}

/// Test split text with the benchmark's characteristic distribution
/// shift: normals carry a drifted tail, and the attacks mix classic
/// floods with low-rate and echo-burst variants never seen in training.
pub fn wide_test_corpus(rng: &mut ChaCha8Rng, normals: usize, dos: usize) -> String {
    let mut lines = Vec::with_capacity(normals + dos);
    for i in 0..normals {
        if i % 7 == 0 {
            lines.push(drifted_normal_line(rng));
        } else if i % 12 == 0 {
            lines.push(icmp_normal_line(rng));
        } else {
            lines.push(normal_line(rng));
        }
    }
    for i in 0..dos {
        match i % 20 {
            0 | 4 | 8 | 12 | 16 => lines.push(low_rate_dos_line(rng)),
            2 | 7 | 13 | 18 => lines.push(burst_dos_line(rng)),
            _ => lines.push(classic_dos_line(rng)),
        }
    }
    lines.join("\n") + "\n"
}

/// A whole corpus: the requested number of records per category, in
/// the order normal, dos, probe, u2r, r2l.
pub fn fixture_corpus(
    rng: &mut ChaCha8Rng,
    normals: usize,
    dos: usize,
    probe: usize,
    u2r: usize,
    r2l: usize,
) -> String {
    let mut text = String::new();
    for _ in 0..normals {
        text.push_str(&normal_line(rng));
        text.push('\n');
    }
    for _ in 0..dos {
        text.push_str(&dos_line(rng));
        text.push('\n');
    }
    for _ in 0..probe {
        text.push_str(&probe_line(rng));
        text.push('\n');
    }
    for _ in 0..u2r {
        text.push_str(&u2r_line(rng));
        text.push('\n');
    }
    for _ in 0..r2l {
        text.push_str(&r2l_line(rng));
        text.push('\n');
    }
    text
}
