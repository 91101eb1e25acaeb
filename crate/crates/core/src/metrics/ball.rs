use std::io::{Read, Write};
use std::ops::Range;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::groups::{Element, GroupConfig, Letter, Word};

pub const DEFAULT_CAP: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallEntry {
    pub length: u32,
    /// Last letter of a geodesic: the element equals `pred_element · letter`.
    pub pred: Option<Letter>,
}

/// All elements of word length at most `radius`, in breadth-first order.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    table: IndexMap<Element, BallEntry>,
    /// `levels[n]` is the index range of the sphere of radius `n`.
    levels: Vec<Range<usize>>,
}

/// Generator letters in traversal order: `a1, a1^-1, a2, a2^-1, ..., t, t^-1`.
pub fn generator_letters(cfg: &GroupConfig) -> Vec<(Letter, Element)> {
    (0..cfg.generator_count())
        .flat_map(|g| {
            [false, true].map(|inverse| {
                (Letter { generator: g, inverse }, cfg.generator_power(g, if inverse { -1 } else { 1 }))
            })
        })
        .collect()
}

/// Breadth-first enumeration of the Cayley ball, right-multiplying by
/// generators. Fails with `CapExceeded` as soon as the table outgrows `cap`.
pub fn bfs_ball(cfg: &GroupConfig, radius: usize, cap: usize) -> Result<Ball> {
    let mut table = IndexMap::new();
    table.insert(cfg.identity(), BallEntry { length: 0, pred: None });
    let mut ball = Ball { radius: 0, table, levels: vec![0..1] };
    ball.extend(cfg, radius, cap)?;
    Ok(ball)
}

impl Ball {
    /// Continues the breadth-first search out to `radius`. On `CapExceeded`
    /// the ball keeps every complete sphere already built.
    pub fn extend(&mut self, cfg: &GroupConfig, radius: usize, cap: usize) -> Result<()> {
        let letters = generator_letters(cfg);
        for n in self.radius + 1..=radius {
            let frontier = self.levels[n - 1].clone();
            let start = self.table.len();
            for i in frontier {
                let g = self.table.get_index(i).expect("frontier index").0.clone();
                for (letter, s) in &letters {
                    let h = cfg.mul(&g, s);
                    if !self.table.contains_key(&h) {
                        if self.table.len() >= cap {
                            self.table.truncate(start);
                            return Err(Error::CapExceeded { cap });
                        }
                        self.table.insert(h, BallEntry { length: n as u32, pred: Some(*letter) });
                    }
                }
            }
            self.levels.push(start..self.table.len());
            self.radius = n;
        }
        Ok(())
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.table.contains_key(g)
    }

    pub fn length(&self, g: &Element) -> Option<usize> {
        self.table.get(g).map(|e| e.length as usize)
    }

    pub fn word_length(&self, g: &Element) -> Result<usize> {
        self.length(g).ok_or(Error::BeyondRadius { radius: self.radius })
    }

    pub fn entry(&self, g: &Element) -> Option<&BallEntry> {
        self.table.get(g)
    }

    /// Elements with their lengths in breadth-first order.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, usize)> {
        self.table.iter().map(|(g, e)| (g, e.length as usize))
    }

    pub fn get_index(&self, i: usize) -> Option<(&Element, usize)> {
        self.table.get_index(i).map(|(g, e)| (g, e.length as usize))
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.table.get_index_of(g)
    }

    /// Index range of all elements of length at most `n`.
    pub fn prefix(&self, n: usize) -> Range<usize> {
        0..self.levels[n.min(self.radius)].end
    }

    /// Number of elements of each length.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|r| r.len()).collect()
    }

    /// A geodesic word for `g`, read off the predecessor chain.
    pub fn geodesic(&self, cfg: &GroupConfig, g: &Element) -> Result<Word> {
        let mut letters = Vec::new();
        let mut cur = g.clone();
        loop {
            let entry = self.table.get(&cur).ok_or(Error::BeyondRadius { radius: self.radius })?;
            match entry.pred {
                None => break,
                Some(l) => {
                    letters.push(l);
                    let step = cfg.generator_power(l.generator, if l.inverse { 1 } else { -1 });
                    cur = cfg.mul(&cur, &step);
                }
            }
        }
        letters.reverse();
        Ok(Word { letters })
    }

    /// CSV with columns `element,length` in breadth-first order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["element", "length"])?;
        for (g, len) in self.iter() {
            w.write_record([g.to_string(), len.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a ball written by `write_csv`. Predecessors are reconstructed
    /// from the group structure; the radius is the largest length present.
    pub fn read_csv<R: Read>(cfg: &GroupConfig, input: R) -> Result<Ball> {
        let mut rows: Vec<(Element, u32)> = Vec::new();
        let mut reader = csv::Reader::from_reader(input);
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let bad = |msg: &str| Error::Parse { position: i + 1, message: msg.to_string() };
            let g = cfg.parse_canonical(rec.get(0).ok_or_else(|| bad("missing element"))?)?;
            let len: u32 = rec.get(1).ok_or_else(|| bad("missing length"))?.parse().map_err(|_| bad("bad length"))?;
            rows.push((g, len));
        }
        rows.sort_by_key(|(_, l)| *l);
        let radius = rows.last().map(|(_, l)| *l as usize).unwrap_or(0);
        let letters = generator_letters(cfg);
        let mut table: IndexMap<Element, BallEntry> = IndexMap::with_capacity(rows.len());
        let mut levels: Vec<Range<usize>> = Vec::new();
        for (g, len) in rows {
            while levels.len() <= len as usize {
                levels.push(table.len()..table.len());
            }
            let pred = if len == 0 {
                None
            } else {
                let found = letters.iter().find(|(l, _)| {
                    let back = cfg.generator_power(l.generator, if l.inverse { 1 } else { -1 });
                    table.get(&cfg.mul(&g, &back)).is_some_and(|e| e.length + 1 == len)
                });
                Some(found.ok_or_else(|| Error::Parse { position: 0, message: format!("no predecessor for {g}") })?.0)
            };
            table.insert(g, BallEntry { length: len, pred });
            levels.last_mut().expect("level").end = table.len();
        }
        Ok(Ball { radius, table, levels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn radius_zero() {
        let cfg = GroupConfig::bs(2).unwrap();
        let b = bfs_ball(&cfg, 0, DEFAULT_CAP).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.word_length(&cfg.identity()).unwrap(), 0);
    }

    #[test]
    fn bs_sphere_growth() {
        let cfg = GroupConfig::bs(2).unwrap();
        let b = bfs_ball(&cfg, 6, DEFAULT_CAP).unwrap();
        let cumulative: Vec<usize> = b.sphere_sizes().iter().scan(0, |acc, x| { *acc += x; Some(*acc) }).collect();
        assert_eq!(cumulative, vec![1, 5, 17, 43, 93, 191, 375]);
    }

    #[test]
    fn sol_sphere_growth() {
        let cfg = GroupConfig::semidirect(&[vec![vec![2, 1], vec![1, 1]]]).unwrap();
        let b = bfs_ball(&cfg, 5, DEFAULT_CAP).unwrap();
        assert_eq!(b.len(), 663);
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = GroupConfig::bs(2).unwrap();
        assert!(matches!(bfs_ball(&cfg, 6, 100), Err(Error::CapExceeded { cap: 100 })));
    }

    #[test]
    fn geodesics_spell_elements() {
        let cfg = GroupConfig::bs(2).unwrap();
        let b = bfs_ball(&cfg, 5, DEFAULT_CAP).unwrap();
        for (g, len) in b.iter() {
            let w = b.geodesic(&cfg, g).unwrap();
            assert_eq!(w.len(), len);
            assert_eq!(&cfg.eval_word(&w), g);
        }
        let a16 = cfg.kernel_element(0, int_vec(&[16]));
        assert!(matches!(b.word_length(&a16), Err(Error::BeyondRadius { radius: 5 })));
    }

    #[test]
    fn csv_round_trip() {
        let cfg = GroupConfig::gamma_m(&[vec![2, 1], vec![1, 1]]).unwrap();
        let b = bfs_ball(&cfg, 3, DEFAULT_CAP).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let back = Ball::read_csv(&cfg, buf.as_slice()).unwrap();
        assert_eq!(back.len(), b.len());
        for (g, len) in b.iter() {
            assert_eq!(back.length(g), Some(len));
        }
        assert_eq!(back.sphere_sizes(), b.sphere_sizes());
    }
}
