//! File formats: beam vectors, families, and design specs as JSON; pattern
//! and power profiles as CSV; run manifests for reproducibility.
//!
//! All numeric text is written with 12 significant digits, lowercase `e`
//! exponents, and `-0` normalized to `0`, so identical runs produce
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::array::{ArrayGeometry, BeamVector};
use crate::design::{defaults, DesignSpec, PhaseProfile};
use crate::error::{Error, Result};
use crate::family::{Family, FamilyMember};
use crate::rootspace::FlipMask;
use crate::select::PowerProfile;
use num_complex::Complex64;

/// Formats a number with 12 significant digits: `{:.11e}` with the mantissa's
/// trailing zeros trimmed, lowercase exponent, and `-0` normalized to `0`.
/// Non-finite values format as `inf`/`-inf`/`NaN`.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.11e}");
    let (mantissa, exponent) = s.split_once('e').expect("always has an exponent");
    let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
    format!("{mantissa}e{exponent}")
}

fn parse_error(origin: &str, detail: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_string(),
        detail: detail.into(),
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_error(&path.display().to_string(), e.to_string()))
}

// ---------------------------------------------------------------------------
// beam-vector files

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamVectorFile {
    m: usize,
    spacing: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn vector_from_file(file: &BeamVectorFile, origin: &str) -> Result<BeamVector> {
    if file.re.len() != file.m || file.im.len() != file.m {
        return Err(parse_error(
            origin,
            format!(
                "m = {} but re has {} entries and im has {}",
                file.m,
                file.re.len(),
                file.im.len()
            ),
        ));
    }
    let geometry = ArrayGeometry::new(file.m, file.spacing)?;
    let weights = file
        .re
        .iter()
        .zip(&file.im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    BeamVector::new(geometry, weights)
}

fn render_real_array(values: impl Iterator<Item = f64>) -> String {
    let parts: Vec<String> = values.map(fmt12).collect();
    format!("[{}]", parts.join(", "))
}

fn render_beam_vector_fields(w: &BeamVector, indent: &str) -> String {
    format!(
        "{indent}\"m\": {},\n{indent}\"spacing\": {},\n{indent}\"re\": {},\n{indent}\"im\": {}",
        w.len(),
        fmt12(w.geometry().spacing()),
        render_real_array(w.weights().iter().map(|x| x.re)),
        render_real_array(w.weights().iter().map(|x| x.im)),
    )
}

/// Serializes a beam vector to its JSON document.
pub fn beam_vector_to_json(w: &BeamVector) -> String {
    format!("{{\n{}\n}}\n", render_beam_vector_fields(w, "  "))
}

/// Parses a beam vector from JSON text; `origin` labels errors.
pub fn beam_vector_from_json(text: &str, origin: &str) -> Result<BeamVector> {
    let file: BeamVectorFile =
        serde_json::from_str(text).map_err(|e| parse_error(origin, e.to_string()))?;
    vector_from_file(&file, origin)
}

pub fn read_beam_vector(path: &Path) -> Result<BeamVector> {
    beam_vector_from_json(&read_to_string(path)?, &path.display().to_string())
}

pub fn write_beam_vector(path: &Path, w: &BeamVector) -> Result<()> {
    Ok(fs::write(path, beam_vector_to_json(w))?)
}

// ---------------------------------------------------------------------------
// family files

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyMemberFile {
    mask: String,
    m: usize,
    spacing: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    mother: BeamVectorFile,
    distinct_count: usize,
    members: Vec<FamilyMemberFile>,
}

/// Serializes a family: the mother record, the distinct count, and one
/// record per member carrying its flip mask as a bit string (character `i`
/// names root `i`).
pub fn family_to_json(family: &Family) -> String {
    let mut out = String::from("{\n  \"mother\": {\n");
    out.push_str(&render_beam_vector_fields(family.mother(), "    "));
    out.push_str("\n  },\n");
    out.push_str(&format!(
        "  \"distinct_count\": {},\n  \"members\": [\n",
        family.distinct_count()
    ));
    for (i, member) in family.members().iter().enumerate() {
        out.push_str(&format!("    {{\n      \"mask\": \"{}\",\n", member.mask));
        out.push_str(&render_beam_vector_fields(&member.vector, "      "));
        out.push_str(if i + 1 < family.distinct_count() {
            "\n    },\n"
        } else {
            "\n    }\n"
        });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn family_from_json(text: &str, origin: &str) -> Result<Family> {
    let file: FamilyFile =
        serde_json::from_str(text).map_err(|e| parse_error(origin, e.to_string()))?;
    let mother = vector_from_file(&file.mother, origin)?;
    if file.distinct_count != file.members.len() {
        return Err(parse_error(
            origin,
            format!(
                "distinct_count = {} but {} members listed",
                file.distinct_count,
                file.members.len()
            ),
        ));
    }
    if file.members.is_empty() {
        return Err(parse_error(origin, "family has no members"));
    }
    let mut members = Vec::with_capacity(file.members.len());
    for record in &file.members {
        let vector = vector_from_file(
            &BeamVectorFile {
                m: record.m,
                spacing: record.spacing,
                re: record.re.clone(),
                im: record.im.clone(),
            },
            origin,
        )?;
        mother.check_same_geometry(&vector)?;
        let mask = FlipMask::parse(&record.mask)
            .ok_or_else(|| parse_error(origin, format!("bad flip mask {:?}", record.mask)))?;
        if mask.len() != mother.len() - 1 {
            return Err(parse_error(
                origin,
                format!(
                    "mask {:?} has {} bits; expected {} (one per root)",
                    record.mask,
                    mask.len(),
                    mother.len() - 1
                ),
            ));
        }
        members.push(FamilyMember { mask, vector });
    }
    Ok(Family::from_parts(mother, members))
}

pub fn read_family(path: &Path) -> Result<Family> {
    family_from_json(&read_to_string(path)?, &path.display().to_string())
}

pub fn write_family(path: &Path, family: &Family) -> Result<()> {
    Ok(fs::write(path, family_to_json(family))?)
}

// ---------------------------------------------------------------------------
// design-spec files

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignSpecFile {
    m: usize,
    spacing: f64,
    sector_deg: (f64, f64),
    total_power: f64,
    #[serde(default)]
    out_sector_deg: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    insector_grid_count: Option<usize>,
    #[serde(default)]
    outsector_grid_count: Option<usize>,
    #[serde(default)]
    phase_profile: Option<String>,
    #[serde(default)]
    quadrature_points: Option<usize>,
    #[serde(default)]
    restarts: Option<usize>,
}

/// Parses a design spec; omitted fields fall back to the documented
/// defaults, and an omitted sidelobe region defaults to everything beyond a
/// 5 degree transition band around the sector.
pub fn design_spec_from_json(text: &str, origin: &str) -> Result<DesignSpec> {
    let file: DesignSpecFile =
        serde_json::from_str(text).map_err(|e| parse_error(origin, e.to_string()))?;
    let geometry = ArrayGeometry::new(file.m, file.spacing)?;
    let (lo, hi) = file.sector_deg;
    let out = file
        .out_sector_deg
        .unwrap_or_else(|| DesignSpec::default_out_sector(lo, hi));
    let profile = match file.phase_profile.as_deref() {
        None => PhaseProfile::default(),
        Some(name) => match name.to_ascii_lowercase().as_str() {
            "advance" => PhaseProfile::Advance,
            "delay" => PhaseProfile::Delay,
            "flat" => PhaseProfile::Flat,
            other => {
                return Err(parse_error(
                    origin,
                    format!("unknown phase_profile {other:?}; expected advance, delay, or flat"),
                ))
            }
        },
    };
    DesignSpec::new(
        geometry,
        file.sector_deg,
        out,
        file.total_power,
        file.delta.unwrap_or(defaults::DELTA),
        file.insector_grid_count.unwrap_or(defaults::IN_SECTOR_GRID),
        file.outsector_grid_count
            .unwrap_or(defaults::OUT_SECTOR_GRID),
        profile,
        file.quadrature_points.unwrap_or(defaults::QUADRATURE_POINTS),
        file.restarts.unwrap_or(defaults::RESTARTS),
    )
}

pub fn read_design_spec(path: &Path) -> Result<DesignSpec> {
    design_spec_from_json(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// CSV outputs

fn db(power: f64) -> f64 {
    crate::array::to_db(power)
}

/// Pattern CSV: `theta_deg,power_linear,power_db` for a single pattern;
/// with several patterns the power columns carry `_1`, `_2`, ... suffixes
/// (one pair per input vector).
pub fn pattern_csv(angles_deg: &[f64], patterns: &[&[f64]]) -> String {
    assert!(!patterns.is_empty(), "at least one pattern column");
    for p in patterns {
        assert_eq!(p.len(), angles_deg.len(), "pattern length matches grid");
    }
    let mut out = String::from("theta_deg");
    if patterns.len() == 1 {
        out.push_str(",power_linear,power_db");
    } else {
        for i in 1..=patterns.len() {
            out.push_str(&format!(",power_linear_{i},power_db_{i}"));
        }
    }
    out.push('\n');
    for (row, &theta) in angles_deg.iter().enumerate() {
        out.push_str(&fmt12(theta));
        for p in patterns {
            out.push(',');
            out.push_str(&fmt12(p[row]));
            out.push(',');
            out.push_str(&fmt12(db(p[row])));
        }
        out.push('\n');
    }
    out
}

pub fn write_pattern_csv(path: &Path, angles_deg: &[f64], patterns: &[&[f64]]) -> Result<()> {
    Ok(fs::write(path, pattern_csv(angles_deg, patterns))?)
}

/// Power-profile CSV: `element,power_linear,power_db_rel_avg` with 1-based
/// element indices; the dB column is relative to the uniform target.
pub fn power_csv(profile: &PowerProfile) -> String {
    let target = profile.target();
    let mut out = String::from("element,power_linear,power_db_rel_avg\n");
    for (i, &p) in profile.per_element().iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i + 1, fmt12(p), fmt12(db(p / target))));
    }
    out
}

pub fn write_power_csv(path: &Path, profile: &PowerProfile) -> Result<()> {
    Ok(fs::write(path, power_csv(profile))?)
}

// ---------------------------------------------------------------------------
// run manifests

/// Record of one CLI invocation, written as `<output>.manifest.json` next to
/// every output file: replaying `argv` reproduces the outputs byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand name.
    pub command: String,
    /// Full resolved argument vector (excluding the binary path).
    pub argv: Vec<String>,
    /// Input files consumed.
    pub inputs: Vec<String>,
    /// Output files produced (manifests not included).
    pub outputs: Vec<String>,
    /// Library version that produced the outputs.
    pub version: String,
    /// Wall-clock duration of the command in seconds.
    pub wall_time_s: f64,
}

/// Manifest path for an output file: `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Writes the manifest next to each of its listed outputs.
pub fn write_manifests(manifest: &RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
    for output in &manifest.outputs {
        fs::write(manifest_path(Path::new(output)), &text)?;
    }
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| parse_error(&path.display().to_string(), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{enumerate_family, EnumerateOptions};
    use crate::select::power_profile;

    fn geo(m: usize) -> ArrayGeometry {
        ArrayGeometry::new(m, 0.5).unwrap()
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(1.0), "1e0");
        assert_eq!(fmt12(0.5), "5e-1");
        assert_eq!(fmt12(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt12(1234.5), "1.2345e3");
        assert_eq!(fmt12(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt12(f64::NEG_INFINITY), "-inf");
        // 12 significant digits survive a parse round trip (half-ulp in the
        // twelfth digit is a relative error of at most 5e-12)
        let x = -0.123456789012345;
        let back: f64 = fmt12(x).parse().unwrap();
        assert!((back - x).abs() <= 5e-12 * x.abs());
    }

    #[test]
    fn beam_vector_round_trip() {
        let w = BeamVector::new(
            geo(3),
            vec![
                Complex64::new(1.0, -2.0),
                Complex64::new(0.25, 0.0),
                Complex64::new(-1.0 / 3.0, 1e-9),
            ],
        )
        .unwrap();
        let text = beam_vector_to_json(&w);
        let back = beam_vector_from_json(&text, "test").unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back.geometry().spacing(), 0.5);
        for (a, b) in w.weights().iter().zip(back.weights()) {
            assert!((a - b).norm() <= 1e-11 * w.norm());
        }
        // serialization is stable
        assert_eq!(text, beam_vector_to_json(&back));
    }

    #[test]
    fn beam_vector_rejects_bad_documents() {
        let bad_len = r#"{"m": 3, "spacing": 0.5, "re": [1, 2], "im": [0, 0, 0]}"#;
        assert!(matches!(
            beam_vector_from_json(bad_len, "test"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            beam_vector_from_json("not json", "test"),
            Err(Error::Parse { .. })
        ));
        let unknown = r#"{"m": 1, "spacing": 0.5, "re": [1], "im": [0], "extra": 1}"#;
        assert!(beam_vector_from_json(unknown, "test").is_err());
        let bad_geo = r#"{"m": 2, "spacing": -0.5, "re": [1, 1], "im": [0, 0]}"#;
        assert!(matches!(
            beam_vector_from_json(bad_geo, "test"),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(matches!(
            read_beam_vector(Path::new("/nonexistent/w.json")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn family_round_trip() {
        let w = BeamVector::from_real(geo(4), &[1.0, -0.5, 0.25, 2.0]).unwrap();
        let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        let text = family_to_json(&family);
        let back = family_from_json(&text, "test").unwrap();
        assert_eq!(back.distinct_count(), family.distinct_count());
        for (a, b) in family.members().iter().zip(back.members()) {
            assert_eq!(a.mask, b.mask);
            for (x, y) in a.vector.weights().iter().zip(b.vector.weights()) {
                assert!((x - y).norm() <= 1e-11 * w.norm());
            }
        }
        assert_eq!(text, family_to_json(&back));
    }

    #[test]
    fn family_validation() {
        let w = BeamVector::from_real(geo(3), &[1.0, 2.0, 4.0]).unwrap();
        let family = enumerate_family(&w, &EnumerateOptions::default()).unwrap();
        let text = family_to_json(&family);
        // corrupt the count
        let bad = text.replace("\"distinct_count\": 4", "\"distinct_count\": 5");
        assert!(matches!(
            family_from_json(&bad, "test"),
            Err(Error::Parse { .. })
        ));
        // corrupt a mask
        let bad = text.replace("\"mask\": \"10\"", "\"mask\": \"1x\"");
        assert!(matches!(
            family_from_json(&bad, "test"),
            Err(Error::Parse { .. })
        ));
        let bad = text.replace("\"mask\": \"10\"", "\"mask\": \"101\"");
        assert!(matches!(
            family_from_json(&bad, "test"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn design_spec_defaults_and_validation() {
        let minimal = r#"{"m": 10, "spacing": 0.5, "sector_deg": [-10, 10], "total_power": 10}"#;
        let spec = design_spec_from_json(minimal, "test").unwrap();
        assert_eq!(spec.geometry().elements(), 10);
        assert_eq!(spec.out_sector_deg(), &[(-90.0, -15.0), (15.0, 90.0)]);
        assert_eq!(spec.delta(), 0.1);
        assert_eq!(spec.insector_grid_count(), 41);
        assert_eq!(spec.outsector_grid_count(), 180);
        assert_eq!(spec.phase_profile(), PhaseProfile::Advance);
        assert_eq!(spec.quadrature_points(), 2048);
        assert_eq!(spec.restarts(), 8);

        let full = r#"{
            "m": 6, "spacing": 0.45, "sector_deg": [5, 25],
            "out_sector_deg": [[-90, -5], [35, 90]],
            "total_power": 2.5, "delta": 0.2,
            "insector_grid_count": 21, "outsector_grid_count": 120,
            "phase_profile": "flat", "quadrature_points": 512, "restarts": 3
        }"#;
        let spec = design_spec_from_json(full, "test").unwrap();
        assert_eq!(spec.phase_profile(), PhaseProfile::Flat);
        assert_eq!(spec.out_sector_deg(), &[(-90.0, -5.0), (35.0, 90.0)]);
        assert_eq!(spec.restarts(), 3);

        let bad_profile = minimal.replace("\"total_power\": 10", "\"total_power\": 10, \"phase_profile\": \"x\"");
        assert!(design_spec_from_json(&bad_profile, "test").is_err());
        let overlap = r#"{"m": 4, "spacing": 0.5, "sector_deg": [-10, 10],
                          "out_sector_deg": [[0, 30]], "total_power": 1}"#;
        assert!(matches!(
            design_spec_from_json(overlap, "test"),
            Err(Error::InvalidDesignSpec(_))
        ));
        assert!(design_spec_from_json("{}", "test").is_err());
    }

    #[test]
    fn pattern_csv_golden() {
        let angles = [-90.0, 0.0, 90.0];
        let p = [4.0, 0.0, 0.25];
        let csv = pattern_csv(&angles, &[&p]);
        let expected = "theta_deg,power_linear,power_db\n\
                        -9e1,4e0,6.02059991328e0\n\
                        0,0,-inf\n\
                        9e1,2.5e-1,-6.02059991328e0\n";
        assert_eq!(csv, expected);
    }

    #[test]
    fn pattern_csv_multi_column() {
        let angles = [0.0, 10.0];
        let p1 = [1.0, 2.0];
        let p2 = [3.0, 4.0];
        let csv = pattern_csv(&angles, &[&p1, &p2]);
        assert!(csv.starts_with(
            "theta_deg,power_linear_1,power_db_1,power_linear_2,power_db_2\n"
        ));
        assert_eq!(csv.lines().count(), 3);
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), 5);
        assert_eq!(row[1], "1e0");
        assert_eq!(row[3], "3e0");
    }

    #[test]
    fn power_csv_golden() {
        let w = BeamVector::from_real(geo(2), &[1.0, 1.0]).unwrap();
        let profile = power_profile(&[w], 4.0).unwrap();
        let csv = power_csv(&profile);
        assert_eq!(
            csv,
            "element,power_linear,power_db_rel_avg\n1,2e0,0\n2,2e0,0\n"
        );
    }

    #[test]
    fn manifest_round_trip_and_paths() {
        assert_eq!(
            manifest_path(Path::new("/tmp/out/w.json")),
            PathBuf::from("/tmp/out/w.json.manifest.json")
        );
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("w.json");
        let manifest = RunManifest {
            command: "design".to_string(),
            argv: vec!["design".into(), "--out".into(), out.display().to_string()],
            inputs: vec!["spec.json".to_string()],
            outputs: vec![out.display().to_string()],
            version: "0.1.0".to_string(),
            wall_time_s: 0.25,
        };
        write_manifests(&manifest).unwrap();
        let back = read_manifest(&manifest_path(&out)).unwrap();
        assert_eq!(back.command, "design");
        assert_eq!(back.argv, manifest.argv);
        assert_eq!(back.outputs, manifest.outputs);
    }
}
