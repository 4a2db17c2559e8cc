//! Automorphism files.
//!
//! ```text
//! # comment
//! word: elem 1 (x2^2)
//! word: affine 0 1 0  1 0 0  0 0 1  0 0 0
//! x1 + x2^2
//! x2
//! x3
//! ```
//!
//! `word:` lines list factors separated by `;`, applied left to right.
//! Bare `elem` and `affine` lines are also factors. `affine` takes the
//! nine matrix entries row by row and then the translation. The three
//! components follow, one per line or separated by `;`. When a word is
//! declared the components may be omitted; when both are present they must
//! agree exactly.

use crate::complex::{eval_word, Automorphism, Generator, TameWord};
use crate::error::{Error, Result};
use crate::io::parse::{parse_in, print_rational, X_VARS};
use crate::poly::{Poly, Q};

fn syntax<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { line, col, msg: msg.into() })
}

fn parse_number(tok: &str, line: usize, col: usize) -> Result<Q> {
    let p = parse_in(tok, X_VARS, line, col)?;
    if !p.is_constant() {
        return syntax(line, col, format!("`{}` is not a number", tok));
    }
    Ok(p.constant_term())
}

/// Parses one factor, `col` being the 1-based column where `src` starts.
pub fn parse_generator(src: &str, line: usize, col: usize) -> Result<Generator> {
    let trimmed = src.trim_start();
    let col = col + (src.len() - trimmed.len());
    let src = trimmed.trim_end();
    if let Some(rest) = src.strip_prefix("affine") {
        let mut nums = Vec::new();
        let mut offset = col + "affine".len();
        for piece in rest.split(char::is_whitespace) {
            if !piece.is_empty() {
                nums.push(parse_number(piece, line, offset)?);
            }
            offset += piece.len() + 1;
        }
        if nums.len() != 12 {
            return syntax(line, col, format!("affine needs 12 numbers, found {}", nums.len()));
        }
        let matrix = std::array::from_fn(|i| std::array::from_fn(|j| nums[3 * i + j].clone()));
        let translation = std::array::from_fn(|i| nums[9 + i].clone());
        return Generator::affine(matrix, translation);
    }
    if let Some(rest) = src.strip_prefix("elem") {
        let body = rest.trim_start();
        let mut c = col + "elem".len() + (rest.len() - body.len());
        let digits: String = body.chars().take_while(|ch| ch.is_ascii_digit()).collect();
        let index: usize = match digits.parse() {
            Ok(i) if (1..=3).contains(&i) => i,
            _ => return syntax(line, c, "elem needs an index 1, 2 or 3"),
        };
        let expr = &body[digits.len()..];
        c += digits.len();
        if expr.trim().is_empty() {
            return syntax(line, c, "elem needs a polynomial");
        }
        let p = parse_in(expr, X_VARS, line, c)?;
        return Generator::elementary(index - 1, p);
    }
    syntax(line, col, "expected `affine` or `elem`")
}

pub fn print_generator(g: &Generator) -> String {
    match g {
        Generator::Affine { matrix, translation } => {
            let nums: Vec<String> = matrix.iter().flatten().chain(translation).map(print_rational).collect();
            format!("affine {}", nums.join(" "))
        }
        Generator::Elementary { index, p } => format!("elem {} ({})", index + 1, p),
    }
}

/// Splits on `;` keeping the 1-based start column of each piece.
fn pieces(s: &str, col0: usize) -> impl Iterator<Item = (&str, usize)> {
    let mut col = col0;
    s.split(';').map(move |p| {
        let c = col;
        col += p.chars().count() + 1;
        (p, c)
    })
}

pub fn parse_automorphism(text: &str) -> Result<Automorphism> {
    let mut factors = Vec::new();
    let mut declared = false;
    let mut comps: Vec<Poly> = Vec::new();
    let mut last_line = 1;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap();
        let t = content.trim_start();
        let col = 1 + content.chars().count() - t.chars().count();
        if t.trim().is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix("word:") {
            declared = true;
            for (p, c) in pieces(rest, col + "word:".len()) {
                if !p.trim().is_empty() {
                    factors.push(parse_generator(p, line, c)?);
                }
            }
            continue;
        }
        if t.starts_with("affine") || t.starts_with("elem") {
            declared = true;
            factors.push(parse_generator(t, line, col)?);
            continue;
        }
        for (p, c) in pieces(content, 1) {
            if !p.trim().is_empty() {
                comps.push(parse_in(p, X_VARS, line, c)?);
            }
        }
    }
    let word = TameWord::new(factors);
    match (comps.len(), declared) {
        (0, true) => eval_word(&word),
        (3, false) => Automorphism::new(comps.try_into().unwrap()),
        (3, true) => Automorphism::with_witness(comps.try_into().unwrap(), word),
        (k, _) => syntax(last_line, 1, format!("expected 3 components, found {}", k)),
    }
}

pub fn print_automorphism(f: &Automorphism) -> String {
    let mut out = String::new();
    if let Some(w) = &f.witness {
        for g in &w.factors {
            out.push_str("word: ");
            out.push_str(&print_generator(g));
            out.push('\n');
        }
    }
    for c in &f.components {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn print_word(w: &TameWord) -> String {
    w.factors.iter().map(|g| format!("word: {}\n", print_generator(g))).collect()
}

pub fn read_automorphism(path: &std::path::Path) -> std::result::Result<Automorphism, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_automorphism(&text).map_err(|e| format!("{}: {}", path.display(), e))
}
