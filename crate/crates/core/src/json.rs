//! JSON helpers: `{re, im}` complex values and deterministic number output.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Writes every float with 17 significant digits in exponent form, so the
/// value round-trips bit-exactly and identical inputs give identical bytes.
/// Non-finite values become `null`.
#[derive(Debug, Default)]
pub struct FixedDigitsFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl FixedDigitsFormatter {
    fn write_float<W: ?Sized + io::Write>(writer: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(writer, "{v:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.inner.$name(writer $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for FixedDigitsFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        Self::write_float(writer, value)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        Self::write_float(writer, value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

/// Serializes `value` as pretty JSON using [`FixedDigitsFormatter`].
pub fn to_fixed_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigitsFormatter::default());
    value
        .serialize(&mut ser)
        .expect("serializing in-memory values cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}
