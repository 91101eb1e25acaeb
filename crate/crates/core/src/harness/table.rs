use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// One row: the largest minimal conjugator over pairs of total size `≤ n`,
/// with the lexicographically least pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClfRow {
    pub n: usize,
    pub clf: u64,
    pub u_word: String,
    pub v_word: String,
    pub conjugator_word: String,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Clf,
    Tclf,
    Rclf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClfTable {
    pub kind: TableKind,
    pub rows: Vec<ClfRow>,
}

impl ClfTable {
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].clf <= w[1].clf)
    }

    pub fn all_certified(&self) -> bool {
        self.rows.iter().all(|r| r.certified)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "clf", "u_word", "v_word", "conjugator_word", "certified"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.clf.to_string(),
                r.u_word.clone(),
                r.v_word.clone(),
                r.conjugator_word.clone(),
                r.certified.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Per-sum best entry, folded into rows by a running maximum.
#[derive(Clone, Debug, Default)]
pub(crate) struct Extremal {
    pub value: u64,
    pub pair: Option<(String, String, String)>,
    pub certified: bool,
}

impl Extremal {
    pub fn new() -> Self {
        Extremal { value: 0, pair: None, certified: true }
    }

    /// Whether `(value, words)` should replace the current entry: larger
    /// values win, ties go to the lexicographically least `(u, v)`.
    pub fn beats(&self, value: u64, u: &str, v: &str) -> bool {
        match &self.pair {
            None => true,
            Some((cu, cv, _)) => value > self.value || (value == self.value && (u, v) < (cu.as_str(), cv.as_str())),
        }
    }

    pub fn offer(&mut self, value: u64, u: String, v: String, g: String) {
        if self.beats(value, &u, &v) {
            self.value = value;
            self.pair = Some((u, v, g));
        }
    }
}

/// Running maximum over sums `0..=n` for each `n`.
pub(crate) fn fold_rows(per_sum: &[Extremal], kind: TableKind) -> ClfTable {
    let mut rows = Vec::with_capacity(per_sum.len());
    let mut best = Extremal::new();
    let mut certified = true;
    for (n, e) in per_sum.iter().enumerate() {
        certified &= e.certified;
        if let Some((u, v, g)) = &e.pair {
            best.offer(e.value, u.clone(), v.clone(), g.clone());
        }
        let (u, v, g) = best.pair.clone().unwrap_or_default();
        rows.push(ClfRow { n, clf: best.value, u_word: u, v_word: v, conjugator_word: g, certified });
    }
    ClfTable { kind, rows }
}
