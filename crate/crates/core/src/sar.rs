//! Region detection on amplitude images.
//!
//! Labeled pixels are stacked in row-major order into one response vector.
//! The design has an intercept and one indicator column per non-baseline
//! region, so `exp(beta_1)` is the baseline mean and `exp(beta_k) - 1` is the
//! relative mean difference of region `k`. Each indicator is tested with a
//! one-degree-of-freedom Wald test against zero.

use std::collections::BTreeSet;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::detector::{wald_test, HypothesisSpec, WaldReport};
use crate::diagnostics::{quantile_residuals, r_squared, standard_errors, ResidualSeries, ResidualSummary};
use crate::error::{Error, Result};
use crate::linalg;
use crate::link::Link;
use crate::regression::{fit_mle, FitOptions, FitResult, RegressionDataset};

/// Amplitude grid with a region-label mask of the same shape, both row-major.
/// Label 0 marks pixels that belong to no region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionImage {
    height: usize,
    width: usize,
    amplitudes: Vec<f64>,
    labels: Vec<u32>,
}

impl RegionImage {
    pub fn new(height: usize, width: usize, amplitudes: Vec<f64>, labels: Vec<u32>) -> Result<Self> {
        let cells = height * width;
        if amplitudes.len() != cells || labels.len() != cells {
            return Err(Error::DimensionMismatch(format!(
                "{height}x{width} image needs {cells} cells, got {} amplitudes and {} labels",
                amplitudes.len(),
                labels.len()
            )));
        }
        if let Some(i) = amplitudes.iter().position(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidImage(format!(
                "amplitude {} at (row {}, column {}) is not a nonnegative number",
                amplitudes[i],
                i / width,
                i % width
            )));
        }
        let bad: Vec<String> = (0..cells)
            .filter(|&i| labels[i] != 0 && amplitudes[i] == 0.0)
            .take(10)
            .map(|i| format!("({}, {})", i / width, i % width))
            .collect();
        if !bad.is_empty() {
            return Err(Error::InvalidImage(format!(
                "labeled pixels with zero amplitude at (row, column) {}",
                bad.join(", ")
            )));
        }
        let image = Self {
            height,
            width,
            amplitudes,
            labels,
        };
        match image.region_labels().len() {
            0 => Err(Error::InvalidImage("no labeled regions".into())),
            1 => Err(Error::InvalidImage("need at least two labeled regions".into())),
            _ => Ok(image),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Distinct nonzero labels, ascending.
    pub fn region_labels(&self) -> Vec<u32> {
        self.labels
            .iter()
            .copied()
            .filter(|&l| l != 0)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Smallest region label.
    pub fn default_baseline(&self) -> u32 {
        self.region_labels()[0]
    }

    pub fn labeled_pixel_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != 0).count()
    }
}

/// Reads an amplitude grid (CSV, or binary PGM detected by its `P5` magic)
/// and a CSV label mask.
pub fn load_region_image(amplitude_path: &Path, mask_path: &Path) -> Result<RegionImage> {
    let bytes = std::fs::read(amplitude_path).map_err(|source| Error::Io {
        path: amplitude_path.to_path_buf(),
        source,
    })?;
    let (ah, aw, amplitudes) = if bytes.starts_with(b"P5") {
        read_pgm(&bytes).map_err(|message| Error::Parse {
            path: amplitude_path.to_path_buf(),
            message,
        })?
    } else {
        read_grid_csv(&bytes, amplitude_path, |s| s.parse::<f64>().ok())?
    };
    let mask_bytes = std::fs::read(mask_path).map_err(|source| Error::Io {
        path: mask_path.to_path_buf(),
        source,
    })?;
    let (mh, mw, labels) = read_grid_csv(&mask_bytes, mask_path, |s| s.parse::<u32>().ok())?;
    if (ah, aw) != (mh, mw) {
        return Err(Error::DimensionMismatch(format!(
            "amplitude grid is {ah}x{aw} but mask is {mh}x{mw}"
        )));
    }
    RegionImage::new(ah, aw, amplitudes, labels)
}

fn read_grid_csv<T>(bytes: &[u8], path: &Path, parse: impl Fn(&str) -> Option<T>) -> Result<(usize, usize, Vec<T>)> {
    let err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut cells = Vec::new();
    let mut width = None;
    let mut height = 0;
    for record in reader.records() {
        let record = record.map_err(|e| err(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(err(format!("row {} has {} cells, expected {w}", height + 1, record.len())));
            }
            _ => {}
        }
        for (col, cell) in record.iter().enumerate() {
            let value = parse(cell).ok_or_else(|| {
                err(format!("malformed cell '{cell}' at row {}, column {}", height + 1, col + 1))
            })?;
            cells.push(value);
        }
        height += 1;
    }
    let width = width.ok_or_else(|| err("empty grid".into()))?;
    Ok((height, width, cells))
}

/// Binary greyscale PGM (`P5`), 8 or 16 bit, values divided by the header maximum.
fn read_pgm(bytes: &[u8]) -> std::result::Result<(usize, usize, Vec<f64>), String> {
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or("malformed PGM header")?;
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 65_535 {
        return Err(format!("unsupported PGM maximum value {maxval}"));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err("malformed PGM header".into());
    }
    pos += 1;
    let depth = if maxval < 256 { 1 } else { 2 };
    let data = &bytes[pos..];
    let needed = width * height * depth;
    if data.len() < needed {
        return Err(format!("PGM data has {} bytes, expected {needed}", data.len()));
    }
    let scale = maxval as f64;
    let values = if depth == 1 {
        data[..needed].iter().map(|&b| b as f64 / scale).collect()
    } else {
        data[..needed]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 / scale)
            .collect()
    };
    Ok((height, width, values))
}

/// Dummy-variable regression design built from a [`RegionImage`].
#[derive(Debug, Clone)]
pub struct RegionDesign {
    pub dataset: RegressionDataset,
    pub baseline_label: u32,
    /// `(label, column)` for every non-baseline region, labels ascending.
    pub dummy_map: Vec<(u32, usize)>,
    /// Region label of every observation.
    pub row_labels: Vec<u32>,
    /// `(row, column)` pixel position of every observation.
    pub pixels: Vec<(usize, usize)>,
}

impl RegionDesign {
    /// Column of the region's indicator; `None` for the baseline.
    pub fn column_of(&self, label: u32) -> Option<usize> {
        self.dummy_map.iter().find(|(l, _)| *l == label).map(|&(_, c)| c)
    }

    pub fn coefficient_names(&self) -> Vec<String> {
        std::iter::once(format!("intercept (region {})", self.baseline_label))
            .chain(self.dummy_map.iter().map(|(l, _)| format!("region {l}")))
            .collect()
    }
}

pub fn build_design(image: &RegionImage, baseline_label: u32) -> Result<RegionDesign> {
    let regions = image.region_labels();
    if !regions.contains(&baseline_label) {
        return Err(Error::InvalidImage(format!(
            "baseline label {baseline_label} does not occur in the mask (labels: {regions:?})"
        )));
    }
    let dummy_map: Vec<(u32, usize)> = regions
        .iter()
        .copied()
        .filter(|&l| l != baseline_label)
        .enumerate()
        .map(|(k, l)| (l, k + 1))
        .collect();

    let mut y = Vec::new();
    let mut row_labels = Vec::new();
    let mut pixels = Vec::new();
    for (i, (&a, &l)) in image.amplitudes.iter().zip(&image.labels).enumerate() {
        if l != 0 {
            y.push(a);
            row_labels.push(l);
            pixels.push((i / image.width, i % image.width));
        }
    }
    let x = DMatrix::from_fn(y.len(), dummy_map.len() + 1, |i, j| {
        if j == 0 || dummy_map[j - 1].0 == row_labels[i] {
            1.0
        } else {
            0.0
        }
    });
    let dataset = RegressionDataset::new(y, x)?;
    Ok(RegionDesign {
        dataset,
        baseline_label,
        dummy_map,
        row_labels,
        pixels,
    })
}

/// Relative difference `exp(beta) - 1` between a region mean and the baseline
/// mean, for the region's indicator coefficient `beta`.
pub fn region_effect(beta: f64) -> f64 {
    beta.exp_m1()
}

/// Detection outcome for one non-baseline region.
#[derive(Debug, Clone, Serialize)]
pub struct RegionTest {
    pub label: u32,
    pub coefficient: usize,
    /// `exp(beta_k) - 1`: relative difference of the region mean from the baseline mean.
    pub effect: f64,
    pub wald: WaldReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub baseline_label: u32,
    pub coefficient_names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// Wald p-value of `beta_i = 0` for every coefficient.
    pub p_values: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub pfa: f64,
    pub r_squared: f64,
    pub log_likelihood: f64,
    pub region_effects: Vec<RegionTest>,
    pub residuals: ResidualSummary,
    pub converged: bool,
    pub iterations: usize,
    pub n_pixels: usize,
}

#[derive(Debug, Clone)]
pub struct RegionDetection {
    pub design: RegionDesign,
    pub fit: FitResult,
    pub residuals: ResidualSeries,
    pub report: DetectionReport,
}

/// Fits the Rayleigh model on the region design and tests every region indicator.
pub fn detect_regions(image: &RegionImage, baseline_label: u32, pfa: f64) -> Result<RegionDetection> {
    if !(pfa > 0.0 && pfa < 1.0) {
        return Err(Error::domain("pfa", pfa, "(0, 1)"));
    }
    let design = build_design(image, baseline_label)?;
    detect_on_design(design, pfa)
}

/// [`detect_regions`] for an already built design.
pub fn detect_on_design(design: RegionDesign, pfa: f64) -> Result<RegionDetection> {
    let link = Link::Log;
    let data = &design.dataset;
    let fit = fit_mle(data, link, &FitOptions::default())?;
    if !fit.converged {
        return Err(Error::NonConvergence {
            iterations: fit.iterations,
            gradient_norm: fit.gradient_norm,
        });
    }
    let tests = (0..fit.n_coefficients())
        .map(|i| wald_test(&fit, &HypothesisSpec::single(i, pfa)?))
        .collect::<Result<Vec<_>>>()?;
    let region_effects = design
        .dummy_map
        .iter()
        .map(|&(label, column)| RegionTest {
            label,
            coefficient: column,
            effect: region_effect(fit.beta_hat[column]),
            wald: tests[column],
        })
        .collect();
    let residuals = quantile_residuals(&fit, data)?;
    let report = DetectionReport {
        baseline_label: design.baseline_label,
        coefficient_names: design.coefficient_names(),
        coefficients: fit.beta_hat.iter().copied().collect(),
        standard_errors: standard_errors(&fit),
        p_values: tests.iter().map(|t| t.p_value).collect(),
        thresholds: tests.iter().map(|t| t.threshold).collect(),
        pfa,
        r_squared: r_squared(&fit, data, link)?,
        log_likelihood: fit.log_likelihood,
        region_effects,
        residuals: residuals.summary(),
        converged: fit.converged,
        iterations: fit.iterations,
        n_pixels: data.len(),
    };
    Ok(RegionDetection {
        design,
        fit,
        residuals,
        report,
    })
}

/// Ordinary least squares of the raw amplitudes on the region design, with
/// Student-t p-values for `beta_i = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct BaselineReport {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub residual_variance: f64,
    pub df_residual: usize,
}

pub fn gaussian_baseline(design: &RegionDesign) -> Result<BaselineReport> {
    let x = design.dataset.x();
    let y = design.dataset.y();
    let (n, r) = x.shape();
    let beta = linalg::least_squares(x, y)?;
    let resid = y - x * &beta;
    let df = n - r;
    let rss = resid.norm_squared();
    let sigma2 = rss / df as f64;
    let xtx_inv = linalg::spd_inverse(&x.tr_mul(x), "X'X").map_err(|_| Error::RankDeficient)?;
    let se: Vec<f64> = xtx_inv.diagonal().iter().map(|v| (v * sigma2).sqrt()).collect();
    let t: Vec<f64> = beta.iter().zip(&se).map(|(b, s)| b / s).collect();
    let dist = StudentsT::new(0.0, 1.0, df as f64).map_err(|_| Error::InvalidDataset("no residual degrees of freedom".into()))?;
    let p: Vec<f64> = t.iter().map(|t| 2.0 * dist.sf(t.abs())).collect();
    let mean = y.mean();
    let tss = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    Ok(BaselineReport {
        coefficients: beta.iter().copied().collect(),
        standard_errors: se,
        t_statistics: t,
        p_values: p,
        r_squared: if tss > 0.0 { 1.0 - rss / tss } else { 0.0 },
        residual_variance: sigma2,
        df_residual: df,
    })
}

/// Sample mean of the amplitudes in every region, ascending by label.
pub fn region_means(design: &RegionDesign) -> Vec<(u32, f64)> {
    let y: &DVector<f64> = design.dataset.y();
    let mut labels: Vec<u32> = design.row_labels.clone();
    labels.sort_unstable();
    labels.dedup();
    labels
        .into_iter()
        .map(|l| {
            let (sum, count) = design
                .row_labels
                .iter()
                .zip(y.iter())
                .filter(|(&rl, _)| rl == l)
                .fold((0.0, 0usize), |(s, c), (_, &v)| (s + v, c + 1));
            (l, sum / count as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::RayleighMean;
    use crate::regression::fitted_means;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::io::Write;

    fn write(dir: &Path, name: &str, contents: &[u8]) -> std::path::PathBuf {
        let path = dir.join(name);
        std::fs::File::create(&path).unwrap().write_all(contents).unwrap();
        path
    }

    /// Image with `per_region` pixels per label, labels interleaved row-major.
    fn synthetic(means: &[f64], per_region: usize, seed: u64) -> RegionImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = means.len();
        let width = k * 10;
        let cells = per_region * k;
        let height = cells / width;
        let labels: Vec<u32> = (0..cells).map(|i| (i % k) as u32 + 1).collect();
        let amps = labels
            .iter()
            .map(|&l| RayleighMean::new(means[l as usize - 1]).unwrap().sample(&mut rng))
            .collect();
        RegionImage::new(height, width, amps, labels).unwrap()
    }

    #[test]
    fn minimal_image_loads() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", b"0.5, 1.0\n0.2, 0.3\n");
        let m = write(dir.path(), "m.csv", b"1,1\n2,2\n");
        let img = load_region_image(&a, &m).unwrap();
        assert_eq!(img.region_labels(), vec![1, 2]);
        assert_eq!(img.labeled_pixel_count(), 4);
        assert_eq!(img.amplitudes()[2], 0.2);
    }

    #[test]
    fn load_errors_name_the_problem() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", b"0.5,1.0\n0.2,0.3\n");
        let zeros = write(dir.path(), "z.csv", b"0,0\n0,0\n");
        let err = load_region_image(&a, &zeros).unwrap_err().to_string();
        assert!(err.contains("no labeled regions"), "{err}");

        let a3 = write(dir.path(), "a3.csv", b"1,1,1\n1,1,1\n1,1,1\n");
        let m23 = write(dir.path(), "m23.csv", b"1,1,2\n2,2,1\n");
        let err = load_region_image(&a3, &m23).unwrap_err().to_string();
        assert!(err.contains("3x3") && err.contains("2x3"), "{err}");

        let bad = write(dir.path(), "bad.csv", b"0.5,abc\n0.2,0.3\n");
        let m = write(dir.path(), "m.csv", b"1,1\n2,2\n");
        let err = load_region_image(&bad, &m).unwrap_err().to_string();
        assert!(err.contains("row 1, column 2"), "{err}");

        let zero_amp = write(dir.path(), "za.csv", b"0.5,0\n0.2,0.3\n");
        let err = load_region_image(&zero_amp, &m).unwrap_err().to_string();
        assert!(err.contains("(0, 1)"), "{err}");

        // zero amplitude outside every region is fine
        let m_unused = write(dir.path(), "mu.csv", b"1,0\n2,2\n");
        assert!(load_region_image(&zero_amp, &m_unused).is_ok());
    }

    #[test]
    fn pgm_amplitudes_are_rescaled() {
        let dir = tempfile::tempdir().unwrap();
        let mut pgm = b"P5\n# test\n2 2\n255\n".to_vec();
        pgm.extend_from_slice(&[255, 51, 102, 0]);
        let a = write(dir.path(), "a.pgm", &pgm);
        let m = write(dir.path(), "m.csv", b"1,2\n1,0\n");
        let img = load_region_image(&a, &m).unwrap();
        assert_eq!(img.amplitudes(), &[1.0, 0.2, 0.4, 0.0]);

        let mut pgm16 = b"P5 2 1 1000\n".to_vec();
        pgm16.extend_from_slice(&500u16.to_be_bytes());
        pgm16.extend_from_slice(&1000u16.to_be_bytes());
        let a = write(dir.path(), "b.pgm", &pgm16);
        let m = write(dir.path(), "m2.csv", b"1,2\n");
        assert_eq!(load_region_image(&a, &m).unwrap().amplitudes(), &[0.5, 1.0]);

        let truncated = write(dir.path(), "c.pgm", b"P5 4 4 255\n\x01\x02");
        assert!(load_region_image(&truncated, &m).is_err());
    }

    #[test]
    fn design_layout() {
        let img = synthetic(&[0.127, 0.112, 0.374], 30, 1);
        let design = build_design(&img, 1).unwrap();
        let x = design.dataset.x();
        assert_eq!(x.ncols(), 3);
        assert_eq!(design.dummy_map, vec![(2, 1), (3, 2)]);
        for (i, &l) in design.row_labels.iter().enumerate() {
            let row: Vec<f64> = x.row(i).iter().copied().collect();
            let expected = match l {
                1 => vec![1.0, 0.0, 0.0],
                2 => vec![1.0, 1.0, 0.0],
                _ => vec![1.0, 0.0, 1.0],
            };
            assert_eq!(row, expected);
        }
        for &(label, col) in &design.dummy_map {
            let count = design.row_labels.iter().filter(|&&l| l == label).count();
            assert_eq!(x.column(col).sum(), count as f64);
        }
        assert!(build_design(&img, 7).is_err());
        let other = build_design(&img, 3).unwrap();
        assert_eq!(other.dummy_map, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn region_means_follow_from_coefficients() {
        let img = synthetic(&[0.127, 0.112, 0.374], 200, 2);
        let det = detect_regions(&img, 1, 0.05).unwrap();
        let mu = fitted_means(&det.fit, &det.design.dataset, Link::Log);
        let b = &det.fit.beta_hat;
        for (i, &l) in det.design.row_labels.iter().enumerate() {
            let eta = match det.design.column_of(l) {
                None => b[0],
                Some(c) => b[0] + b[c],
            };
            assert_eq!(mu[i], eta.exp());
        }
        // fitted region means equal the root-mean-square form of the closed-form MLE
        for (label, _) in region_means(&det.design) {
            let ys: Vec<f64> = det
                .design
                .row_labels
                .iter()
                .zip(det.design.dataset.y().iter())
                .filter(|(&l, _)| l == label)
                .map(|(_, &y)| y)
                .collect();
            let closed = crate::regression::intercept_only_mle(&ys);
            let i = det.design.row_labels.iter().position(|&l| l == label).unwrap();
            assert!((mu[i] / closed - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn report_reuses_detector() {
        let img = synthetic(&[0.127, 0.112, 0.374], 300, 3);
        let det = detect_regions(&img, 1, 0.05).unwrap();
        for t in &det.report.region_effects {
            let direct = wald_test(&det.fit, &HypothesisSpec::single(t.coefficient, 0.05).unwrap()).unwrap();
            assert_eq!(direct, t.wald);
            assert_eq!(det.report.p_values[t.coefficient], direct.p_value);
            assert_eq!(t.effect, det.fit.beta_hat[t.coefficient].exp_m1());
        }
        assert!(det.report.converged);
        assert_eq!(det.report.coefficients.len(), 3);
        assert!(detect_regions(&img, 1, 1.5).is_err());
    }

    #[test]
    fn pixel_order_does_not_matter() {
        let img = synthetic(&[0.2, 0.3, 0.5], 60, 4);
        let det = detect_regions(&img, 1, 0.05).unwrap();
        // reverse the pixel order of the whole image
        let amps: Vec<f64> = img.amplitudes().iter().rev().copied().collect();
        let labels: Vec<u32> = img.labels().iter().rev().copied().collect();
        let flipped = RegionImage::new(img.height(), img.width(), amps, labels).unwrap();
        let det2 = detect_regions(&flipped, 1, 0.05).unwrap();
        for i in 0..3 {
            assert!((det.report.coefficients[i] - det2.report.coefficients[i]).abs() < 1e-8);
            assert!((det.report.p_values[i] - det2.report.p_values[i]).abs() < 1e-8);
        }
        assert!((det.report.r_squared - det2.report.r_squared).abs() < 1e-8);
    }

    #[test]
    fn gaussian_baseline_matches_group_means() {
        let img = synthetic(&[0.2, 0.3, 0.5], 90, 5);
        let design = build_design(&img, 1).unwrap();
        let base = gaussian_baseline(&design).unwrap();
        let means = region_means(&design);
        assert!((base.coefficients[0] - means[0].1).abs() < 1e-12);
        assert!((base.coefficients[1] - (means[1].1 - means[0].1)).abs() < 1e-12);
        assert!((base.coefficients[2] - (means[2].1 - means[0].1)).abs() < 1e-12);
        assert!(base.p_values.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!((0.0..=1.0).contains(&base.r_squared));
        assert_eq!(base.df_residual, design.dataset.len() - 3);
    }

    #[test]
    fn gaussian_baseline_equal_means() {
        // two regions with identical sample means
        let amps = vec![1.0, 2.0, 3.0, 2.5, 1.5, 2.0];
        let labels = vec![1, 1, 1, 2, 2, 2];
        let img = RegionImage::new(2, 3, amps, labels).unwrap();
        let base = gaussian_baseline(&build_design(&img, 1).unwrap()).unwrap();
        assert!(base.coefficients[1].abs() < 1e-12);
        assert!((base.p_values[1] - 1.0).abs() < 1e-12);
    }
}
