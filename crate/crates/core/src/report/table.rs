use crate::error::Result;

/// How a column is displayed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Two decimals; CSV adds a `_full` column with full precision.
    Currency,
    /// Fractions shown at 0.1 percentage points (percent in the human view,
    /// three decimals in CSV); CSV adds a `_full` column.
    Share,
    /// Shortest round-trip representation.
    Number,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<(String, Format)>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-text lines emitted after the rows, prefixed with `#` in CSV.
    pub notes: Vec<String>,
}

fn display(cell: &Cell, format: Format, human: bool) -> String {
    match (cell, format) {
        (Cell::Empty, _) => String::new(),
        (Cell::Text(s), _) => s.clone(),
        (Cell::Num(v), Format::Currency) => format!("{v:.2}"),
        (Cell::Num(v), Format::Share) if human => format!("{:.1}%", v * 100.0),
        (Cell::Num(v), Format::Share) => format!("{v:.3}"),
        (Cell::Num(v), _) => format!("{v}"),
    }
}

fn full(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => format!("{v}"),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[(&str, Format)]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|(n, f)| (n.to_string(), *f)).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    /// Numeric value of `name` in every row.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Num(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    fn has_full(format: Format) -> bool {
        matches!(format, Format::Currency | Format::Share)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = Vec::new();
        for (name, format) in &self.columns {
            header.push(name.clone());
            if Self::has_full(*format) {
                header.push(format!("{name}_full"));
            }
        }
        writer.write_record(&header)?;
        for row in &self.rows {
            let mut record = Vec::with_capacity(header.len());
            for (cell, (_, format)) in row.iter().zip(&self.columns) {
                record.push(display(cell, *format, false));
                if Self::has_full(*format) {
                    record.push(full(cell));
                }
            }
            writer.write_record(&record)?;
        }
        let mut text = String::from_utf8(writer.into_inner().map_err(|e| e.into_error())?)
            .expect("csv output is UTF-8");
        for line in &self.notes {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        Ok(text)
    }

    /// Right-aligned plain-text table; a single row is shown as one
    /// `name  value` line per column.
    pub fn render(&self) -> String {
        if self.rows.len() == 1 {
            return self.render_record(&self.rows[0]);
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.columns)
                    .map(|(c, (_, f))| display(c, *f, true))
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, (name, _))| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([name.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: Vec<&str>| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        out.push_str(&line(
            self.columns.iter().map(|(n, _)| n.as_str()).collect(),
        ));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("note: ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}

impl Table {
    fn render_record(&self, row: &[Cell]) -> String {
        let width = self.columns.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        for (cell, (name, format)) in row.iter().zip(&self.columns) {
            out.push_str(format!("{name:<width$}  {}", display(cell, *format, true)).trim_end());
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("note: ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}
