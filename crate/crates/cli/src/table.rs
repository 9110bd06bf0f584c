//! Aligned plain-text and tab-separated tables.

use std::fmt::Write;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Plain,
    Tsv,
}

#[derive(Clone, Debug)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: ToString>(&mut self, cells: impl IntoIterator<Item = S>) {
        let row: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                for r in std::iter::once(&self.headers).chain(&self.rows) {
                    out.push_str(&r.join("\t"));
                    out.push('\n');
                }
            }
            Format::Plain => {
                let widths: Vec<usize> = (0..self.headers.len())
                    .map(|i| {
                        std::iter::once(&self.headers)
                            .chain(&self.rows)
                            .map(|r| r[i].chars().count())
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                for r in std::iter::once(&self.headers).chain(&self.rows) {
                    let mut line = String::new();
                    for (i, cell) in r.iter().enumerate() {
                        if i > 0 {
                            line.push_str("  ");
                        }
                        write!(line, "{cell:<w$}", w = widths[i]).expect("write to string");
                    }
                    out.push_str(line.trim_end());
                    out.push('\n');
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment() {
        let mut t = Table::new(["degree", "group"]);
        t.row(["0", "Z^2"]);
        t.row(["10", "0"]);
        assert_eq!(t.render(Format::Plain), "degree  group\n0       Z^2\n10      0\n");
        assert_eq!(t.render(Format::Tsv), "degree\tgroup\n0\tZ^2\n10\t0\n");
    }
}
