//! CSV assembly: header plus rows, LF line endings, floating point rendered
//! in Rust's shortest round-trip form so written values parse back
//! bit-exactly.

/// A rectangular table ready for serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Serializes the table; every line ends with LF including the last.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest decimal form that parses back to the same bits.
pub fn num(value: f64) -> String {
    format!("{value}")
}

/// Optional numeric cell; absent values serialize as the empty field.
pub fn opt_num(value: Option<f64>) -> String {
    value.map(num).unwrap_or_default()
}

/// Free-text cell, quoted when it contains a comma, quote, or newline.
pub fn text(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_header_and_rows_with_lf() {
        let mut table = Table::new(&["t", "E"]);
        table.push(vec![num(0.0), num(340.0)]);
        table.push(vec![num(0.1437), opt_num(None)]);
        assert_eq!(table.render(), "t,E\n0,340\n0.1437,\n");
    }

    #[test]
    fn empty_table_is_header_only() {
        let table = Table::new(&["a", "b", "c"]);
        assert_eq!(table.render(), "a,b,c\n");
    }

    #[test]
    fn text_cells_are_quoted_only_when_needed() {
        assert_eq!(text("plain"), "plain");
        assert_eq!(text("a, b"), "\"a, b\"");
        assert_eq!(text("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(text("two\nlines"), "\"two\nlines\"");
    }

    #[test]
    fn numbers_round_trip_bit_exactly() {
        for value in [
            0.1437,
            0.1437164615428651,
            1.0 / 3.0,
            -5.320030410267211e-9,
            1e300,
            -0.0,
            f64::MIN_POSITIVE,
        ] {
            let rendered = num(value);
            let parsed: f64 = rendered.parse().unwrap();
            assert_eq!(parsed.to_bits(), value.to_bits(), "value {rendered}");
        }
    }
}
