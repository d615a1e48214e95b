//! JSON with every float written to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Writes floats as `d.dddddddddddddddde±x`; NaN and infinities become `null`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SigDigits;

impl SigDigits {
    fn float<W: ?Sized + io::Write>(w: &mut W, x: f64) -> io::Result<()> {
        if x.is_finite() {
            write!(w, "{x:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
}

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        Self::float(w, x)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, x: f32) -> io::Result<()> {
        Self::float(w, x as f64)
    }
}

/// One JSON document followed by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// A float in the same 17-digit format, for text reports.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.3, -1.0 / 3.0, 1e-300, 6.02e23, 0.0] {
            let s = to_json(&x);
            let back: f64 = serde_json::from_str(s.trim()).unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(to_json(&0.5), "5.0000000000000000e-1\n");
        assert_eq!(to_json(&0.3), "2.9999999999999999e-1\n");
        assert_eq!(to_json(&f64::NAN), "null\n");
    }
}
