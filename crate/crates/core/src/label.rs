//! Text labels for isomorphism classes.
//!
//! Heart classes print as `+`-joined `name` or `name^m` terms in
//! indecomposable order, with `0` for the zero object: `S1^2+X12`. Graded
//! objects print every term as `name[n]` or `name^m[n]`, degrees descending:
//! `S1[1]+S2^2[0]`. When parsing, terms may come in any order, repeated terms
//! add up, and a missing `[n]` means degree 0.

use crate::error::{Error, Result};
use crate::graded::GradedObject;
use crate::heart::{Heart, IsoClass};

fn term(heart: &Heart, index: usize, mult: u32) -> String {
    let name = &heart.indecomposables()[index].name;
    if mult == 1 {
        name.clone()
    } else {
        format!("{name}^{mult}")
    }
}

pub fn heart_label(heart: &Heart, x: &IsoClass) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.parts().iter().map(|&(i, m)| term(heart, i, m)).collect::<Vec<_>>().join("+")
}

pub fn graded_label(heart: &Heart, x: &GradedObject) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.components()
        .rev()
        .flat_map(|(n, xn)| xn.parts().iter().map(move |&(i, m)| format!("{}[{n}]", term(heart, i, m))))
        .collect::<Vec<_>>()
        .join("+")
}

fn parse_term(heart: &Heart, raw: &str, whole: &str) -> Result<(usize, u32, i64)> {
    let bad = |why: &str| Error::Parse(format!("label {whole:?}: term {raw:?} {why}"));
    let mut rest = raw.trim();
    let mut degree = 0;
    if let Some(body) = rest.strip_suffix(']') {
        let open = body.rfind('[').ok_or_else(|| bad("has an unmatched ']'"))?;
        degree = body[open + 1..].trim().parse().map_err(|_| bad("has a non-integer degree"))?;
        rest = body[..open].trim_end();
    }
    let mut mult = 1;
    if let Some(caret) = rest.rfind('^') {
        mult = rest[caret + 1..].trim().parse().map_err(|_| bad("has a malformed multiplicity"))?;
        if mult == 0 {
            return Err(bad("has multiplicity 0"));
        }
        rest = rest[..caret].trim_end();
    }
    let index = heart
        .indecomposables()
        .iter()
        .position(|ind| ind.name == rest)
        .ok_or_else(|| bad(&format!("names no indecomposable of {}", heart.name())))?;
    Ok((index, mult, degree))
}

pub fn parse_graded_label(heart: &Heart, s: &str) -> Result<GradedObject> {
    let trimmed = s.trim();
    if trimmed == "0" {
        return Ok(GradedObject::zero());
    }
    if trimmed.is_empty() {
        return Err(Error::Parse("empty label".into()));
    }
    let mut g = GradedObject::zero();
    for raw in trimmed.split('+') {
        if raw.trim().is_empty() {
            return Err(Error::Parse(format!("label {s:?}: empty term")));
        }
        let (i, m, n) = parse_term(heart, raw, s)?;
        g.insert(n, IsoClass::from_parts([(i, m)]));
    }
    Ok(g)
}

pub fn parse_heart_label(heart: &Heart, s: &str) -> Result<IsoClass> {
    let g = parse_graded_label(heart, s)?;
    if !g.is_heart() {
        return Err(Error::Parse(format!("label {s:?} is not a heart object")));
    }
    Ok(g.component(0))
}
