use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use super::CliError;

/// Pretty JSON with every float written as `{:.16e}` (17 significant
/// digits), so equal values always serialize to equal bytes.
struct FixedFloats(PrettyFormatter<'static>);

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| CliError::Io(format!("serializing output: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// Write through a temporary file in the target directory and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Write to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// One field value at one grid point. Singular points carry zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRow {
    pub z_minus: f64,
    pub z_plus: f64,
    pub alpha: usize,
    pub re: f64,
    pub im: f64,
    pub singular: bool,
}

impl FieldRow {
    pub fn new(z_minus: f64, z_plus: f64, alpha: usize, value: Option<Complex64>) -> Self {
        match value.filter(|v| v.re.is_finite() && v.im.is_finite()) {
            Some(v) => FieldRow {
                z_minus,
                z_plus,
                alpha,
                re: v.re,
                im: v.im,
                singular: false,
            },
            None => FieldRow {
                z_minus,
                z_plus,
                alpha,
                re: 0.0,
                im: 0.0,
                singular: true,
            },
        }
    }
}

pub const CSV_HEADER: &str = "z_minus,z_plus,alpha,re,im,singular_flag";

pub fn rows_to_csv(rows: &[FieldRow]) -> Vec<u8> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{},{:.16e},{:.16e},{}\n",
            r.z_minus, r.z_plus, r.alpha, r.re, r.im, r.singular
        ));
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_fixed_width() {
        #[derive(Serialize)]
        struct T {
            a: f64,
            b: f64,
            c: f64,
        }
        let text = String::from_utf8(to_json(&T { a: 0.1, b: 1.0, c: f64::NAN }).unwrap()).unwrap();
        assert!(text.contains("\"a\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"b\": 1.0000000000000000e0"));
        assert!(text.contains("\"c\": null"));
    }

    #[test]
    fn singular_rows_are_zero_and_flagged() {
        let r = FieldRow::new(0.0, 1.0, 2, Some(Complex64::new(f64::INFINITY, 0.0)));
        assert!(r.singular && r.re == 0.0);
        let csv = String::from_utf8(rows_to_csv(&[r])).unwrap();
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.lines().nth(1).unwrap().ends_with(",2,0.0000000000000000e0,0.0000000000000000e0,true"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
