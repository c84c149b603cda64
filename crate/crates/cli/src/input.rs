//! Resolving the newform argument into data.

use std::fs::File;
use std::path::Path;

use zetaperiod::lvalues::{required_terms, scaled_target_err};
use zetaperiod::newform::CsvHeader;
use zetaperiod::{load_newform, Error, InputFormat, NewformData, Sign};

use crate::commands::Failure;
use crate::{CommonArgs, SourceArgs};

pub const PRECISION_RANGE: (f64, f64) = (1e-14, 1e-6);

pub fn check_precision(p: f64) -> Result<(), Failure> {
    if !(PRECISION_RANGE.0..=PRECISION_RANGE.1).contains(&p) {
        return Err(Failure::Input(format!("--precision {p:e} is outside [1e-14, 1e-6]")));
    }
    Ok(())
}

pub fn parse_sign(v: Option<i64>) -> Result<Option<Sign>, Failure> {
    match v {
        None => Ok(None),
        Some(x) => Sign::from_i64(x).map(Some).ok_or_else(|| Failure::Input(format!("--sign must be 1 or -1, got {x}"))),
    }
}

/// Newform from `delta` or a file; Δ gets as many coefficients as the
/// truncation rule asks for.
pub fn load_source(args: &SourceArgs) -> Result<NewformData, Failure> {
    let common = &args.common;
    check_precision(common.precision)?;
    let source = match (&args.source, &args.input) {
        (Some(_), Some(_)) => return Err(Failure::Input("give either a source or --input, not both".into())),
        (Some(s), None) => s.clone(),
        (None, Some(p)) => p.display().to_string(),
        (None, None) => return Err(Failure::Input("missing newform source (`delta` or a file)".into())),
    };
    if source == "delta" {
        let target = scaled_target_err(1, 12, common.precision);
        return Ok(NewformData::delta(required_terms(1, 12, target)));
    }
    load_file(Path::new(&source), common)
}

pub fn load_file(path: &Path, common: &CommonArgs) -> Result<NewformData, Failure> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let format = if is_csv {
        let (Some(weight), Some(level)) = (common.weight, common.level) else {
            return Err(Failure::Input("CSV input needs --weight and --level".into()));
        };
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
        InputFormat::Csv(CsvHeader { label, level, weight, sign: parse_sign(common.sign)? })
    } else {
        InputFormat::Json
    };
    let mut data = load_newform(file, &format).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if !is_csv {
        if let Some(s) = parse_sign(common.sign)? {
            match data.sign {
                Some(given) if given != s => {
                    return Err(Failure::Input(format!("--sign {} contradicts the file", s.value())));
                }
                _ => data.sign = Some(s),
            }
        }
    }
    Ok(data)
}

/// Exit-code class of a library error.
pub fn classify(err: Error) -> Failure {
    match err {
        Error::Parse(_)
        | Error::Validation(_)
        | Error::Io(_)
        | Error::InsufficientCoefficients { .. }
        | Error::UnknownSign
        | Error::AmbiguousSign { .. }
        | Error::TooLarge(_) => Failure::Input(err.to_string()),
        _ => Failure::Verification(err.to_string()),
    }
}
