use std::fmt;

/// Left-aligned text columns with optional trailing notes.
pub struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl Table {
    pub fn new<const K: usize>(header: [&str; K]) -> Self {
        Table {
            header: Some(header.iter().map(|s| s.to_string()).collect()),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    /// Two columns, no header.
    pub fn pairs() -> Self {
        Table {
            header: None,
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn row<const K: usize>(&mut self, cells: [&str; K]) {
        self.rows
            .push(cells.iter().map(|s| s.to_string()).collect());
    }

    pub fn footer(&mut self, line: String) {
        self.footer.push(line);
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all = self.header.iter().chain(&self.rows);
        let mut widths: Vec<usize> = Vec::new();
        for row in all.clone() {
            for (i, cell) in row.iter().enumerate() {
                let w = cell.chars().count();
                match widths.get_mut(i) {
                    Some(c) => *c = (*c).max(w),
                    None => widths.push(w),
                }
            }
        }
        for row in all {
            let last = row.len().saturating_sub(1);
            for (i, cell) in row.iter().enumerate() {
                if i == last {
                    write!(f, "{cell}")?;
                } else {
                    write!(f, "{cell:<w$}  ", w = widths[i])?;
                }
            }
            writeln!(f)?;
        }
        for line in &self.footer {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
