use std::fs;
use std::path::{Path, PathBuf};

use pqtrain::designs::{
    binomial_design, conventional_design, max_snr_design, parse_train, ptm_design, MaxSnrOptions,
    PulseTrain,
};
use pqtrain::waveforms::{golay_pair, paraunitary, ComplementarySet, GolayPair, ParaunitaryMatrix};
use pqtrain::DopplerGrid64;

use crate::failure::{usage, Failure, Outcome};

pub fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn write(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

/// `ptmN`, `binomialN`, `conventionalN`, `maxsnrN-M`, or a design file path.
pub fn design_train(spec: &str) -> Outcome<PulseTrain<f64>> {
    if Path::new(spec).is_file() {
        let (train, _) = parse_train::<f64>(&read(Path::new(spec))?)?;
        return Ok(train);
    }
    let split = spec
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| unknown_design(spec))?;
    let (kind, size) = spec.split_at(split);
    let number = |s: &str| s.parse::<usize>().map_err(|_| unknown_design(spec));
    let design = match kind {
        "ptm" => ptm_design(number(size)?)?,
        "binomial" => binomial_design(number(size)?)?,
        "conventional" => conventional_design(number(size)?)?,
        "maxsnr" => {
            let (n, m) = size.split_once('-').ok_or_else(|| unknown_design(spec))?;
            max_snr_design(number(n)?, number(m)?, &MaxSnrOptions::default())?.design
        }
        _ => return Err(unknown_design(spec)),
    };
    Ok(design.into_train())
}

fn unknown_design(spec: &str) -> Failure {
    Failure::Usage(format!(
        "unknown design {spec:?}: expected ptmN, binomialN, conventionalN, maxsnrN-M or a design file"
    ))
}

fn order_of(d: usize) -> Outcome<u32> {
    if d < 2 || !d.is_power_of_two() {
        return usage(format!("alphabet size {d} is not a power of two >= 2"));
    }
    Ok(d.trailing_zeros())
}

fn is_matrix(text: &str) -> bool {
    text.contains(';')
}

/// Complementary set of size `d`, from a length-`golay` pair or a waveform file.
///
/// Binary designs use `[y, x]` of the pair; larger alphabets use column 0
/// of the paraunitary matrix built on the pair.
pub fn complementary_set(
    d: usize,
    golay: usize,
    file: Option<&PathBuf>,
) -> Outcome<ComplementarySet> {
    let order = order_of(d)?;
    let set = match file {
        None if d == 2 => ComplementarySet::from_pair(&golay_pair(golay)?),
        None => paraunitary(order, &golay_pair(golay)?)?.column_set(0),
        Some(path) => {
            let text = read(path)?;
            if is_matrix(&text) {
                ParaunitaryMatrix::parse_csv(&text)?.column_set(0)
            } else if d == 2 {
                ComplementarySet::from_pair(&GolayPair::parse_csv(&text)?)
            } else {
                ComplementarySet::parse_csv(&text)?
            }
        }
    };
    if set.size() != d {
        return usage(format!(
            "waveform set has {} members, design needs {d}",
            set.size()
        ));
    }
    Ok(set)
}

/// Paraunitary matrix of size `d` for MIMO maps.
pub fn paraunitary_matrix(
    d: usize,
    golay: usize,
    file: Option<&PathBuf>,
) -> Outcome<ParaunitaryMatrix> {
    let s = match file {
        None => paraunitary(order_of(d)?, &golay_pair(golay)?)?,
        Some(path) => {
            let text = read(path)?;
            if !is_matrix(&text) {
                return usage(format!(
                    "{} is not a paraunitary matrix file",
                    path.display()
                ));
            }
            ParaunitaryMatrix::parse_csv(&text)?
        }
    };
    if s.size() != d {
        return usage(format!("matrix is {0}x{0}, design needs {d}x{d}", s.size()));
    }
    Ok(s)
}

pub fn grid(spec: Option<&str>) -> Outcome<DopplerGrid64> {
    Ok(match spec {
        Some(s) => DopplerGrid64::parse_spec(s)?,
        None => DopplerGrid64::periodic(1024)?,
    })
}

/// `lo:hi`, defaulting to the full grid.
pub fn band(spec: Option<&str>, grid: &DopplerGrid64) -> Outcome<(f64, f64)> {
    let Some(spec) = spec else {
        return Ok((grid.first(), grid.last()));
    };
    let parsed = spec
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)));
    match parsed {
        Some((lo, hi)) if lo <= hi => Ok((lo, hi)),
        _ => usage(format!("band must be lo:hi with lo <= hi, got {spec:?}")),
    }
}

/// `out.csv` with `(i, j)` becomes `out_i_j.csv`.
pub fn suffixed(path: &Path, i: usize, j: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{i}_{j}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{i}_{j}"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_names() {
        assert_eq!(design_train("ptm16").unwrap().len(), 16);
        assert_eq!(
            design_train("binomial5").unwrap().q(),
            &[1.0, 4.0, 6.0, 4.0, 1.0]
        );
        assert_eq!(design_train("maxsnr8-2").unwrap().len(), 8);
        for bad in ["ptm", "maxsnr8", "gauss16", "ptm1x"] {
            assert!(matches!(design_train(bad), Err(Failure::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn bands() {
        let grid = DopplerGrid64::linspace(-1.0, 1.0, 5).unwrap();
        assert_eq!(band(None, &grid).unwrap(), (-1.0, 1.0));
        assert_eq!(band(Some("-0.5:0.25"), &grid).unwrap(), (-0.5, 0.25));
        assert!(band(Some("0.5:-0.5"), &grid).is_err());
        assert!(band(Some("0.5"), &grid).is_err());
    }

    #[test]
    fn suffixes() {
        assert_eq!(
            suffixed(Path::new("out/m.csv"), 1, 0),
            PathBuf::from("out/m_1_0.csv")
        );
        assert_eq!(suffixed(Path::new("m"), 0, 2), PathBuf::from("m_0_2"));
    }

    #[test]
    fn sets_match_alphabet() {
        assert_eq!(complementary_set(2, 8, None).unwrap().size(), 2);
        assert_eq!(complementary_set(4, 8, None).unwrap().size(), 4);
        assert!(complementary_set(3, 8, None).is_err());
    }
}
