//! Machine-readable element serialization.
//!
//! An element serializes as its context plus its terms in canonical order,
//! each term as the coefficient residue, the weight entries as
//! `[mantissa, vexp]` pairs (the entry value is `mantissa / p^vexp`), and
//! the partition indices. The byte output is deterministic for a given
//! element, and deserializing reproduces the element exactly.

use serde::{Deserialize, Serialize};

use drw::{BasicElement, Context, DrwElement, PadicRational, WeightFunction, WittScalar};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub eta: u64,
    pub a: Vec<(u64, i32)>,
    #[serde(rename = "I")]
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDto {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "M")]
    pub prec: u32,
    pub terms: Vec<TermDto>,
}

pub fn to_dto(x: &DrwElement) -> ElementDto {
    let ctx = x.ctx();
    ElementDto {
        p: ctx.p,
        n: ctx.nvars,
        prec: ctx.prec,
        terms: x
            .terms()
            .map(|t| TermDto {
                eta: t.eta().residue(),
                a: t.weight()
                    .entries()
                    .iter()
                    .map(|e| (e.mantissa(), e.vexp()))
                    .collect(),
                indices: t.partition().indices().to_vec(),
            })
            .collect(),
    }
}

pub fn from_dto(dto: &ElementDto) -> Result<DrwElement, CliError> {
    let ctx = Context::new(dto.p, dto.n, dto.prec)?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in &dto.terms {
        if t.a.len() != ctx.nvars {
            return Err(CliError::EntryCount(t.a.len(), ctx.nvars));
        }
        let weight = WeightFunction::new(
            ctx.p,
            t.a.iter()
                .map(|&(m, v)| PadicRational::new(ctx.p, m, v))
                .collect(),
        );
        terms.push(BasicElement::new(
            WittScalar::from_integer(ctx, t.eta as i128),
            weight,
            &t.indices,
        )?);
    }
    Ok(DrwElement::from_terms(ctx, terms)?)
}
