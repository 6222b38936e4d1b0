use std::fmt::Write;

pub const HEADER: &str = "pointfree-report v1";

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    Field(String, String),
    Table {
        name: String,
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    Block(String, String),
}

/// An ordered list of fields, tables and verbatim blocks, rendered either
/// for reading or as `key<TAB>value` records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    items: Vec<Item>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.items.push(Item::Field(key.to_string(), value.to_string()));
        self
    }

    pub fn verdict(&mut self, key: &str, holds: bool) -> &mut Self {
        self.field(key, if holds { "PASS" } else { "FAIL" })
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.items.push(Item::Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
        self
    }

    pub fn block(&mut self, name: &str, text: &str) -> &mut Self {
        self.items.push(Item::Block(name.to_string(), text.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.items.iter().find_map(|i| match i {
            Item::Field(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if machine {
            let _ = writeln!(out, "format\t{HEADER}");
        } else {
            let _ = writeln!(out, "{HEADER}");
        }
        for item in &self.items {
            match item {
                Item::Field(k, v) if machine => {
                    let _ = writeln!(out, "{k}\t{v}");
                }
                Item::Field(k, v) => {
                    let _ = writeln!(out, "{k}: {v}");
                }
                Item::Table { name, columns, rows } if machine => {
                    let _ = writeln!(out, "{name}.columns\t{}", columns.join("\t"));
                    for r in rows {
                        let _ = writeln!(out, "{name}.row\t{}", r.join("\t"));
                    }
                }
                Item::Table { name, columns, rows } => {
                    let _ = writeln!(out, "{name}: {} rows", rows.len());
                    let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
                    for r in rows {
                        for (w, c) in widths.iter_mut().zip(r) {
                            *w = (*w).max(c.chars().count());
                        }
                    }
                    let line = |cells: &[String]| {
                        let padded: Vec<String> = cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                            .collect();
                        format!("  {}", padded.join("  ").trim_end())
                    };
                    let _ = writeln!(out, "{}", line(columns));
                    for r in rows {
                        let _ = writeln!(out, "{}", line(r));
                    }
                }
                Item::Block(name, text) if machine => {
                    for l in text.lines() {
                        let _ = writeln!(out, "{name}.line\t{l}");
                    }
                }
                Item::Block(name, text) => {
                    let _ = writeln!(out, "{name}:");
                    for l in text.lines() {
                        let _ = writeln!(out, "  {l}");
                    }
                }
            }
        }
        out
    }
}
