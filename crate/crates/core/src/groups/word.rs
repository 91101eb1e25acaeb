use num_traits::{Signed, ToPrimitive, Zero};

use super::config::GroupConfig;
use super::element::Element;
use crate::error::{Error, Result};
use crate::linalg::Int;

/// Largest exponent accepted by the parser or produced as a single letter run.
pub const MAX_EXPONENT: i64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A word over the generators and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push_power(&mut self, generator: usize, exponent: i64) {
        let letter = Letter { generator, inverse: exponent < 0 };
        self.letters.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Maximal runs of one generator, as `(generator, net exponent)`.
    pub fn runs(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            let step = if l.inverse { -1 } else { 1 };
            match out.last_mut() {
                Some((g, e)) if *g == l.generator => *e += step,
                _ => out.push((l.generator, step)),
            }
        }
        out.retain(|&(_, e)| e != 0);
        out
    }
}

impl GroupConfig {
    /// Parses `"a1 t^-2 a2^3"`: whitespace-separated `name` or `name^INT`
    /// tokens (`name^{INT}` also accepted). A lone `e` denotes the identity.
    pub fn parse_word(&self, input: &str) -> Result<Word> {
        let mut word = Word::new();
        for (start, token) in tokens(input) {
            let (name, exponent) = match token.find('^') {
                None => (token, 1),
                Some(caret) => {
                    let raw = &token[caret + 1..];
                    let body = raw.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(raw);
                    let exponent: i64 = body.parse().map_err(|_| Error::Parse {
                        position: start + caret + 1,
                        message: format!("invalid exponent {raw:?}"),
                    })?;
                    if exponent.abs() > MAX_EXPONENT {
                        return Err(Error::Parse { position: start + caret + 1, message: "exponent too large".into() });
                    }
                    (&token[..caret], exponent)
                }
            };
            if name == "e" && self.generator_index("e").is_none() {
                continue;
            }
            let generator = self.generator_index(name).ok_or_else(|| Error::Parse {
                position: start,
                message: format!("unknown generator {name:?}; expected one of {}", self.generator_names().join(", ")),
            })?;
            word.push_power(generator, exponent);
        }
        Ok(word)
    }

    /// Left-to-right product of the letters.
    pub fn eval_word(&self, word: &Word) -> Element {
        word.runs()
            .into_iter()
            .fold(self.identity(), |acc, (g, e)| self.mul(&acc, &self.generator_power(g, e)))
    }

    pub fn eval_str(&self, input: &str) -> Result<Element> {
        Ok(self.eval_word(&self.parse_word(input)?))
    }

    /// A word spelling `g` from its normal form: `t^{-p} a^w t^{p+s}` for Γ_M
    /// and `a^x t^y` for semidirect products. Not geodesic in general.
    pub fn normal_form_word(&self, g: &Element) -> Word {
        let d = self.dim();
        let mut word = Word::new();
        let push_vec = |word: &mut Word, v: &[Int]| {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let e = c.to_i64().filter(|e| e.abs() <= MAX_EXPONENT).expect("coordinate too large to spell");
                    word.push_power(i, e);
                }
            }
        };
        match g {
            Element::Gm(e) => {
                word.push_power(d, -e.p());
                push_vec(&mut word, e.w());
                word.push_power(d, e.p() + e.s());
            }
            Element::Sd(e) => {
                push_vec(&mut word, &e.x);
                for (j, &y) in e.y.iter().enumerate() {
                    word.push_power(d + j, y);
                }
            }
        }
        word.reduced()
    }

    pub fn format_word(&self, word: &Word) -> String {
        let runs = word.runs();
        if runs.is_empty() {
            return "e".into();
        }
        runs.iter()
            .map(|&(g, e)| {
                let name = &self.generator_names()[g];
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Word {
    /// Free reduction: cancels adjacent inverse pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input.split_whitespace().map(move |t| (t.as_ptr() as usize - input.as_ptr() as usize, t))
}
