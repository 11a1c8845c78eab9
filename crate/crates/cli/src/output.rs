use std::io::{self, Write};

/// `printf("%.12g")`.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..12).contains(&exp) {
        trim_zeros(format!("{:.*}", (11 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => g12(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// CSV table with `#` comment lines ahead of the column header.
pub struct Table {
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { notes: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn note(&mut self, key: &str, value: f64) {
        self.notes.push(format!("{key}: {}", g12(value)));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, header: &[String], mut out: W) -> io::Result<()> {
        for line in header.iter().chain(&self.notes) {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::g12;

    #[test]
    fn general_format() {
        assert_eq!(g12(1.195_694_630_298_31), "1.1956946303");
        assert_eq!(g12(164.35), "164.35");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(5.092_5e12), "5.0925e+12");
        assert_eq!(g12(123_456_789_012.0), "123456789012");
        assert_eq!(g12(1_234_567_890_123.0), "1.23456789012e+12");
        assert_eq!(g12(0.000_123_4), "0.0001234");
        assert_eq!(g12(1.234e-5), "1.234e-05");
        assert_eq!(g12(-2.5), "-2.5");
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(999_999_999_999.9), "1e+12");
    }
}
