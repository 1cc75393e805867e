//! A line-oriented relational script language.
//!
//! ```text
//! LOAD songs $1
//! SELECT rock songs Genre eq Rock
//! AGG per_artist songs Artist Duration count
//! EMIT per_artist
//! ```
//!
//! Statements, one per line; lines starting with `#` are comments:
//!
//! | statement | effect |
//! |---|---|
//! | `LOAD name file` | read a table file; `$N` is the N-th table argument |
//! | `PROJECT out in col,...` | keep the listed columns |
//! | `RENAME out in col=new,...` | rename columns |
//! | `UNION out a b` / `INTERSECT out a b` / `EXCEPT out a b` | set operations |
//! | `SELECT out in col op literal` | keep rows where `col op literal` |
//! | `JOIN out a b acol op bcol` | one row per matching pair |
//! | `EXTEND out in newcol fn col,...` | append `newcol = fn(cols)` |
//! | `AGG out in groupcol valcol fn` | group and reduce |
//! | `EMIT name` | write the relation as a table to the output |
//!
//! Comparison ops are `eq neq lt gt contains`; row functions are
//! `pass concat sum min max count first`; aggregators are
//! `sum min max count first`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use assocarray::io::{format_table, parse_key, parse_value, read_table};
use assocarray::relational::{self, Aggregator, CompareOp, RowFunction, RowPairPredicate, RowPredicate};
use assocarray::{Key, Relation, Semiring};

use crate::{usage, CliError};

struct Interp<'a> {
    tables: &'a [PathBuf],
    base: &'a Path,
    env: HashMap<String, Relation>,
    out: String,
}

fn keys(list: &str) -> Vec<Key> {
    list.split(',').filter(|s| !s.is_empty()).map(parse_key).collect()
}

fn op(text: &str) -> Result<CompareOp, String> {
    CompareOp::parse(text).ok_or_else(|| format!("unknown comparison `{text}` (expected eq, neq, lt, gt or contains)"))
}

impl Interp<'_> {
    fn get(&self, name: &str) -> Result<&Relation, String> {
        self.env.get(name).ok_or_else(|| format!("unknown relation `{name}`"))
    }

    fn path(&self, arg: &str) -> Result<PathBuf, String> {
        if let Some(n) = arg.strip_prefix('$') {
            let i: usize = n.parse().map_err(|_| format!("bad table reference `{arg}`"))?;
            return i
                .checked_sub(1)
                .and_then(|i| self.tables.get(i))
                .cloned()
                .ok_or_else(|| format!("table argument {arg} not supplied ({} given)", self.tables.len()));
        }
        Ok(self.base.join(arg))
    }

    fn exec(&mut self, words: &[&str]) -> Result<(), CliError> {
        let arity = |n: usize, form: &str| {
            if words.len() == n {
                Ok(())
            } else {
                Err(CliError::Usage(format!("expected `{form}`")))
            }
        };
        let (result, out) = match words[0].to_ascii_uppercase().as_str() {
            "LOAD" => {
                arity(3, "LOAD name file")?;
                let path = self.path(words[2]).map_err(CliError::Usage)?;
                let a = read_table(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                (Ok(a), words[1])
            }
            "PROJECT" => {
                arity(4, "PROJECT out in col,...")?;
                (relational::project(self.get(words[2]).map_err(CliError::Usage)?, &keys(words[3])), words[1])
            }
            "RENAME" => {
                arity(4, "RENAME out in col=new,...")?;
                let mut from = Vec::new();
                let mut to = Vec::new();
                for pair in words[3].split(',').filter(|s| !s.is_empty()) {
                    let (f, t) = pair.split_once('=').ok_or_else(|| CliError::Usage(format!("expected col=new, got `{pair}`")))?;
                    from.push(parse_key(f));
                    to.push(parse_key(t));
                }
                (relational::rename(self.get(words[2]).map_err(CliError::Usage)?, &from, &to), words[1])
            }
            w @ ("UNION" | "INTERSECT" | "EXCEPT") => {
                arity(4, &format!("{w} out a b"))?;
                let (a, b) = (self.get(words[2]).map_err(CliError::Usage)?, self.get(words[3]).map_err(CliError::Usage)?);
                let r = match w {
                    "UNION" => relational::union(a, b),
                    "INTERSECT" => relational::intersection(a, b),
                    _ => relational::difference(a, b),
                };
                (r, words[1])
            }
            "SELECT" => {
                if words.len() < 6 {
                    return Err(CliError::Usage("expected `SELECT out in col op literal`".into()));
                }
                let phi = RowPredicate::compare(op(words[4]).map_err(CliError::Usage)?, parse_value(&words[5..].join(" ")));
                (relational::select(self.get(words[2]).map_err(CliError::Usage)?, &[parse_key(words[3])], &phi), words[1])
            }
            "JOIN" => {
                arity(7, "JOIN out a b acol op bcol")?;
                let theta = RowPairPredicate::compare(op(words[5]).map_err(CliError::Usage)?);
                let (a, b) = (self.get(words[2]).map_err(CliError::Usage)?, self.get(words[3]).map_err(CliError::Usage)?);
                (relational::theta_join_pairs(a, b, &[parse_key(words[4])], &[parse_key(words[6])], &theta), words[1])
            }
            "EXTEND" => {
                arity(6, "EXTEND out in newcol fn col,...")?;
                let f = RowFunction::by_name(words[4]).ok_or_else(|| CliError::Usage(format!("unknown row function `{}`", words[4])))?;
                let a = self.get(words[2]).map_err(CliError::Usage)?;
                (extend(a, &keys(words[5]), &parse_key(words[3]), &f), words[1])
            }
            "AGG" => {
                arity(6, "AGG out in groupcol valcol fn")?;
                let f = Aggregator::by_name(words[5]).ok_or_else(|| CliError::Usage(format!("unknown aggregator `{}`", words[5])))?;
                let a = self.get(words[2]).map_err(CliError::Usage)?;
                (relational::aggregate(a, &parse_key(words[3]), &parse_key(words[4]), &f), words[1])
            }
            "EMIT" => {
                arity(2, "EMIT name")?;
                let text = format_table(self.get(words[1]).map_err(CliError::Usage)?).map_err(|e| CliError::Validation(e.to_string()))?;
                self.out.push_str(&text);
                return Ok(());
            }
            other => return Err(CliError::Usage(format!("unknown statement `{other}`"))),
        };
        let rel = result.map_err(|e| CliError::Validation(e.to_string()))?;
        self.env.insert(out.to_owned(), rel);
        Ok(())
    }
}

/// The input with `out` replaced by `f` over `cols`.
fn extend(a: &Relation, cols: &[Key], out: &Key, f: &RowFunction) -> assocarray::Result<Relation> {
    let column = relational::extended_projection(a, cols, out, f)?;
    let rest: Vec<Key> = a.col_keys().iter().filter(|c| *c != out).cloned().collect();
    relational::project(a, &rest)?.ew_add(&column, &Semiring::max_min())
}

/// Run `script`, resolving `LOAD` paths against `base` and `$N` against
/// `tables`. Returns everything `EMIT` wrote.
pub fn run_query(script: &str, tables: &[PathBuf], base: &Path) -> Result<String, CliError> {
    let mut it = Interp { tables, base, env: HashMap::new(), out: String::new() };
    for (i, line) in script.lines().enumerate() {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.first().is_none_or(|w| w.starts_with('#')) {
            continue;
        }
        it.exec(&words).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("line {}: {m}", i + 1)),
            CliError::Validation(m) => CliError::Validation(format!("line {}: {m}", i + 1)),
        })?;
    }
    Ok(it.out)
}

/// [`run_query`] on a script file; relative `LOAD` paths are taken from the
/// script's directory.
pub fn cmd_query(script: &Path, tables: &[PathBuf]) -> Result<String, CliError> {
    let text = std::fs::read_to_string(script).map_err(|e| usage(format!("{}: {e}", script.display())))?;
    let base = script.parent().unwrap_or(Path::new("."));
    run_query(&text, tables, base)
}
