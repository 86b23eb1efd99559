use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use super::file::{ConstellationFile, Kind};
use super::{read_file, tolerance, Failure, Report};
use crate::frames::{classify, frame_bounds, Frame, FrameClass};
use crate::linalg::{ComplexVector, Tolerance};
use crate::muf::certify_muf_system;
use crate::sic::displacement_overlaps;

pub(super) fn run(path: &Path, eps: Option<f64>) -> Result<Report, Failure> {
    let file = read_file(path)?;
    let tol = tolerance(eps, Some(&file))?;
    let mut report = verify_file(&file, tol)?;
    if let Some(obj) = report.value.as_object_mut() {
        obj.insert("file".into(), json!(path.display().to_string()));
    }
    Ok(report)
}

pub(crate) fn verify_file(file: &ConstellationFile, tol: Tolerance) -> Result<Report, Failure> {
    match file.kind {
        Kind::Frame => verify_frames(file, tol),
        Kind::MufSystem => verify_system(file, tol, false),
        Kind::MubSet => verify_system(file, tol, true),
        Kind::Fiducial => verify_fiducial(file, tol),
        Kind::Sic => verify_sic(file, tol),
        Kind::State => verify_state(file, tol),
    }
}

fn header(file: &ConstellationFile, tol: Tolerance) -> String {
    format!("kind: {}\ndim: {}\neps: {:e}\n", file.kind.as_str(), file.dim, tol.eps)
}

fn class_name(c: FrameClass) -> &'static str {
    match c {
        FrameClass::Parseval => "parseval",
        FrameClass::Tight => "tight",
        FrameClass::Generic => "generic",
    }
}

fn build_frames(file: &ConstellationFile, tol: Tolerance) -> Result<Vec<Frame>, String> {
    file.frames
        .iter()
        .enumerate()
        .map(|(i, vs)| Frame::new(vs.clone(), format!("frame {i}"), tol).map_err(|e| format!("frame {i}: {e}")))
        .collect()
}

fn verify_frames(file: &ConstellationFile, tol: Tolerance) -> Result<Report, Failure> {
    let mut text = header(file, tol);
    let frames = match build_frames(file, tol) {
        Ok(f) => f,
        Err(msg) => return Ok(rejected(file, tol, text, msg)),
    };
    let mut entries = Vec::new();
    for (i, f) in frames.iter().enumerate() {
        let b = frame_bounds(f).map_err(Failure::fail)?;
        let class = class_name(classify(f, tol).map_err(Failure::fail)?);
        let _ = writeln!(text, "frame {i}: n={} bounds=[{:e}, {:e}] class={class}", f.len(), b.lower, b.upper);
        entries.push(json!({"size": f.len(), "lower": b.lower, "upper": b.upper, "class": class}));
    }
    text.push_str("result: PASS\n");
    Ok(Report {
        pass: true,
        value: json!({"kind": file.kind.as_str(), "dim": file.dim, "eps": tol.eps, "frames": entries, "pass": true}),
        text,
    })
}

fn rejected(file: &ConstellationFile, tol: Tolerance, mut text: String, msg: String) -> Report {
    let _ = writeln!(text, "invalid: {msg}\nresult: FAIL");
    Report {
        pass: false,
        value: json!({"kind": file.kind.as_str(), "dim": file.dim, "eps": tol.eps, "error": msg, "pass": false}),
        text,
    }
}

fn verify_system(file: &ConstellationFile, tol: Tolerance, bases: bool) -> Result<Report, Failure> {
    let mut text = header(file, tol);
    if file.frames.len() < 2 {
        return Err(Failure::usage("a frame system needs at least two frames"));
    }
    let frames = match build_frames(file, tol) {
        Ok(f) => f,
        Err(msg) => return Ok(rejected(file, tol, text, msg)),
    };
    let r = certify_muf_system(&frames, tol).map_err(Failure::usage)?;
    let mut pass = r.certified;
    let _ = writeln!(
        text,
        "frames: {}\noverlap: {:.17}\nmax deviation: {:e}",
        frames.len(),
        r.overlap,
        r.max_deviation
    );
    if let Some(ok) = r.bounds_ok {
        let _ = writeln!(text, "frame bounds consistent: {ok}");
    }
    let mut value = json!({
        "kind": file.kind.as_str(),
        "dim": file.dim,
        "eps": tol.eps,
        "frames": frames.len(),
        "overlap": r.overlap,
        "max_deviation": r.max_deviation,
        "bounds_ok": r.bounds_ok,
        "tight_implies_inv_d": r.tight_implies_inv_d,
    });
    if bases {
        let orthonormal = frames.iter().all(|f| f.is_orthonormal_basis(tol));
        let inv_d = (r.overlap - 1.0 / file.dim as f64).abs() <= tol.eps;
        let _ = writeln!(text, "orthonormal bases: {orthonormal}\noverlap is 1/d: {inv_d}");
        value["orthonormal"] = json!(orthonormal);
        value["overlap_is_inv_d"] = json!(inv_d);
        pass &= orthonormal && inv_d;
    }
    value["pass"] = json!(pass);
    let _ = writeln!(text, "result: {}", if pass { "PASS" } else { "FAIL" });
    Ok(Report { pass, value, text })
}

fn norm_error(v: &ComplexVector) -> f64 {
    (v.norm() - 1.0).abs()
}

fn verify_fiducial(file: &ConstellationFile, tol: Tolerance) -> Result<Report, Failure> {
    let mut text = header(file, tol);
    let v = file.single_vector().map_err(Failure::usage)?;
    let target = 1.0 / (file.dim as f64 + 1.0);
    let max_err = displacement_overlaps(v)
        .iter()
        .skip(1)
        .map(|z| (z.norm_sqr() - target).abs())
        .fold(0.0, f64::max);
    let nerr = norm_error(v);
    let pass = nerr <= tol.eps && max_err <= tol.eps;
    let _ = writeln!(text, "norm error: {nerr:e}\nmax overlap error: {max_err:e}");
    let _ = writeln!(text, "result: {}", if pass { "PASS" } else { "FAIL" });
    Ok(Report {
        pass,
        value: json!({
            "kind": file.kind.as_str(),
            "dim": file.dim,
            "eps": tol.eps,
            "norm_error": nerr,
            "max_overlap_error": max_err,
            "pass": pass,
        }),
        text,
    })
}

fn verify_sic(file: &ConstellationFile, tol: Tolerance) -> Result<Report, Failure> {
    let mut text = header(file, tol);
    let d = file.dim;
    let vs = match file.frames.as_slice() {
        [f] => f,
        _ => return Err(Failure::usage("a sic file must hold exactly one frame")),
    };
    let target = 1.0 / (d as f64 + 1.0);
    let nerr = vs.iter().map(norm_error).fold(0.0, f64::max);
    let mut max_err: f64 = 0.0;
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            max_err = max_err.max((vs[i].overlap(&vs[j]) - target).abs());
        }
    }
    let count_ok = vs.len() == d * d;
    let pass = count_ok && nerr <= tol.eps && max_err <= tol.eps;
    let _ = writeln!(
        text,
        "vectors: {} (expected {})\nnorm error: {nerr:e}\nmax overlap error: {max_err:e}",
        vs.len(),
        d * d
    );
    let _ = writeln!(text, "result: {}", if pass { "PASS" } else { "FAIL" });
    Ok(Report {
        pass,
        value: json!({
            "kind": file.kind.as_str(),
            "dim": d,
            "eps": tol.eps,
            "vectors": vs.len(),
            "norm_error": nerr,
            "max_overlap_error": max_err,
            "pass": pass,
        }),
        text,
    })
}

fn verify_state(file: &ConstellationFile, tol: Tolerance) -> Result<Report, Failure> {
    let mut text = header(file, tol);
    let v = file.single_vector().map_err(Failure::usage)?;
    let nerr = norm_error(v);
    let pass = nerr <= tol.eps;
    let _ = writeln!(text, "norm error: {nerr:e}\nresult: {}", if pass { "PASS" } else { "FAIL" });
    Ok(Report {
        pass,
        value: json!({"kind": file.kind.as_str(), "dim": file.dim, "eps": tol.eps, "norm_error": nerr, "pass": pass}),
        text,
    })
}
