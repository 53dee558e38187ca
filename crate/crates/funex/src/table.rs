//! In-memory CSV tables. Floats carry 17 significant digits.

/// `x` in scientific notation with a 16-digit mantissa fraction.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("write to memory");
        Self {
            writer,
            width: header.len(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let record: Vec<S> = fields.into_iter().collect();
        debug_assert_eq!(record.len(), self.width, "row width differs from header");
        self.writer.write_record(record).expect("write to memory");
    }

    pub fn finish(self) -> Vec<u8> {
        self.writer.into_inner().expect("flush to memory")
    }
}

/// Space-separated index list, e.g. a permutation mapping.
pub fn indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.0e-300, 0.135_335_283_236_612_7, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn header_is_always_written() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(t.finish(), b"a,b\n");
    }
}
