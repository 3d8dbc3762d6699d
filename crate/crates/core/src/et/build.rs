use crate::error::{Error, Result};
use crate::field::Fp;
use crate::groups::{initial_form, GroupWord};
use crate::linalg::Subspace;
use crate::pbw::{one_relator_lemma_order, pbw_search_with, SearchOptions};
use crate::quad::{CombineMode, QuadraticAlgebra, TElement};
use crate::tensor::{DeglexOrder, MultiIndex, NcPoly, DEFAULT_TRUNCATION};

use super::recipe::{DemushkinCase, DemushkinParam, EtRecipe};

/// Largest `f` accepted (the power `2^f` must fit a machine integer).
const MAX_F: u32 = 60;

fn bad(msg: String) -> Error {
    Error::InvalidDemushkinParams(msg)
}

fn is_prime_power_of(q: u64, p: u64) -> bool {
    let mut q = q;
    if q < p {
        return false;
    }
    while q.is_multiple_of(p) {
        q /= p;
    }
    q == 1
}

/// Checks the classification constraints for a Demushkin node over `F_p`.
pub fn validate_demushkin(d: usize, case: DemushkinCase, param: DemushkinParam, p: u32) -> Result<()> {
    let check_f = |f: Option<u32>, finite: bool| match f {
        None if finite => Err(bad(format!("case {} needs a finite f", case.name()))),
        Some(e) if !(2..=MAX_F).contains(&e) => {
            Err(bad(format!("f = {} outside 2..={}", e, MAX_F)))
        }
        _ => Ok(()),
    };
    if case != DemushkinCase::I && p != 2 {
        return Err(bad(format!("case {} exists only for p = 2", case.name())));
    }
    match (case, param) {
        (DemushkinCase::I, DemushkinParam::Q(q)) => {
            if d < 2 || !d.is_multiple_of(2) {
                return Err(bad(format!("case i needs even d >= 2, got {}", d)));
            }
            if q != 0 && (q == 2 || !is_prime_power_of(q, p as u64)) {
                return Err(bad(format!("q = {} is not 0 or a power p^k != 2 of p = {}", q, p)));
            }
            Ok(())
        }
        (DemushkinCase::II, DemushkinParam::F(f)) => {
            if d < 3 || d.is_multiple_of(2) {
                return Err(bad(format!("case ii needs odd d >= 3, got {}", d)));
            }
            check_f(f, false)
        }
        (DemushkinCase::III, DemushkinParam::F(f)) => {
            if d < 2 || !d.is_multiple_of(2) {
                return Err(bad(format!("case iii needs even d >= 2, got {}", d)));
            }
            check_f(f, false)
        }
        (DemushkinCase::IV, DemushkinParam::F(f)) => {
            if d < 4 || !d.is_multiple_of(2) {
                return Err(bad(format!("case iv needs even d >= 4, got {}", d)));
            }
            check_f(f, true)
        }
        _ => Err(bad(format!("wrong parameter kind for case {}", case.name()))),
    }
}

fn comm(i: usize, j: usize) -> GroupWord {
    GroupWord::comm(GroupWord::gen(i), GroupWord::gen(j))
}

fn pow(i: usize, e: i64) -> GroupWord {
    GroupWord::power(GroupWord::gen(i), e)
}

/// The relator of the Demushkin presentation (0-based generators).
pub fn demushkin_relator(
    d: usize,
    case: DemushkinCase,
    param: DemushkinParam,
    p: u32,
) -> Result<GroupWord> {
    validate_demushkin(d, case, param, p)?;
    let two_f = |f: Option<u32>| f.map(|e| 1i64 << e);
    let mut parts = Vec::new();
    let pairs_from = |start: usize, parts: &mut Vec<GroupWord>| {
        let mut k = start;
        while k + 1 < d {
            parts.push(comm(k, k + 1));
            k += 2;
        }
    };
    match (case, param) {
        (DemushkinCase::I, DemushkinParam::Q(q)) => {
            if q != 0 {
                parts.push(pow(0, q as i64));
            }
            pairs_from(0, &mut parts);
        }
        (DemushkinCase::II, DemushkinParam::F(f)) => {
            parts.push(pow(0, 2));
            if let Some(e) = two_f(f) {
                parts.push(pow(1, e));
            }
            pairs_from(1, &mut parts);
        }
        (DemushkinCase::III, DemushkinParam::F(f)) => {
            parts.push(pow(0, 2 + two_f(f).unwrap_or(0)));
            pairs_from(0, &mut parts);
        }
        (DemushkinCase::IV, DemushkinParam::F(f)) => {
            parts.push(pow(0, 2));
            parts.push(comm(0, 1));
            parts.push(pow(2, two_f(f).expect("validated finite")));
            pairs_from(2, &mut parts);
        }
        _ => unreachable!("validated above"),
    }
    Ok(GroupWord::product(parts))
}

/// `[X_1,X_2] + [X_3,X_4] + ...` and its variants with a leading `X_1^2`.
pub fn demushkin_display_form(d: usize, case: DemushkinCase, field: Fp) -> NcPoly {
    let mut f = NcPoly::zero(field, d);
    let (square, start) = match case {
        DemushkinCase::I => (false, 0),
        DemushkinCase::II => (true, 1),
        DemushkinCase::III | DemushkinCase::IV => (true, 0),
    };
    if square {
        f.add_term(MultiIndex::pair(0, 0), 1);
    }
    let mut k = start;
    while k + 1 < d {
        f.add_term(MultiIndex::pair(k, k + 1), 1);
        f.add_term(MultiIndex::pair(k + 1, k), field.neg(1));
        k += 2;
    }
    f
}

/// Cup products `chi_i chi_j = c_ij xi`, row-major.
pub fn demushkin_cup_table(d: usize, case: DemushkinCase, field: Fp) -> Vec<u32> {
    let mut c = vec![0u32; d * d];
    match case {
        DemushkinCase::I => {
            for k in (0..d.saturating_sub(1)).step_by(2) {
                c[k * d + k + 1] = 1;
                c[(k + 1) * d + k] = field.neg(1);
            }
        }
        DemushkinCase::II => {
            c[0] = 1;
            for k in (1..d.saturating_sub(1)).step_by(2) {
                c[k * d + k + 1] = 1;
                c[(k + 1) * d + k] = 1;
            }
        }
        DemushkinCase::III | DemushkinCase::IV => {
            c[0] = 1;
            for k in (0..d.saturating_sub(1)).step_by(2) {
                c[k * d + k + 1] = 1;
                c[(k + 1) * d + k] = 1;
            }
        }
    }
    c
}

fn check_shape(r: &EtRecipe) -> Result<()> {
    if r.is_pfr() || r.is_et_shape() {
        Ok(())
    } else {
        Err(Error::InadmissibleRecipe(format!(
            "{} mixes pythagorean and elementary type nodes",
            r
        )))
    }
}

fn need_p2(p: u32, what: &str) -> Result<()> {
    if p == 2 {
        Ok(())
    } else {
        Err(Error::InadmissibleRecipe(format!("{} requires p = 2", what)))
    }
}

/// An algebra together with a generator order that is expected to be PBW.
#[derive(Clone, Debug)]
pub struct BuiltAlgebra {
    pub algebra: QuadraticAlgebra,
    /// ascending generator list
    pub order_hint: Vec<usize>,
}

fn concat_orders(a: &[usize], b: &[usize], shift: usize) -> Vec<usize> {
    a.iter().copied().chain(b.iter().map(|&g| g + shift)).collect()
}

fn search_order(a: &QuadraticAlgebra, hints: Vec<Vec<usize>>, fixed_first: Option<usize>) -> Option<Vec<usize>> {
    pbw_search_with(
        a,
        &SearchOptions {
            hints,
            fixed_first,
            ..SearchOptions::default()
        },
    )
    .map(|c| c.order().ascending().to_vec())
}

fn identity(d: usize) -> Vec<usize> {
    (0..d).collect()
}

fn cohomology_node(r: &EtRecipe, field: Fp) -> Result<BuiltAlgebra> {
    let p = field.p();
    Ok(match r {
        EtRecipe::Free(d) => BuiltAlgebra {
            algebra: QuadraticAlgebra::trivial(field, *d).with_t(Some(TElement::Zero))?,
            order_hint: identity(*d),
        },
        EtRecipe::Demushkin { d, case, param } => {
            validate_demushkin(*d, *case, *param, p)?;
            let c = demushkin_cup_table(*d, *case, field);
            let omega = Subspace::span(field, d * d, &[c]).annihilator();
            if d * d - omega.dim() != 1 {
                return Err(Error::InternalInconsistency(format!(
                    "second cohomology of dimension {}",
                    d * d - omega.dim()
                )));
            }
            let labels = (1..=*d).map(|i| format!("x{}", i)).collect();
            let algebra = QuadraticAlgebra::new(field, labels, omega)?.with_t(Some(TElement::Zero))?;
            // the dual is one-relator; reverse its lemma order
            let hint = one_relator_lemma_order(&algebra.quadratic_dual())
                .map(|o| o.into_iter().rev().collect())
                .unwrap_or_else(|| identity(*d));
            let order_hint = search_order(&algebra, vec![hint.clone()], None).unwrap_or(hint);
            BuiltAlgebra { algebra, order_hint }
        }
        EtRecipe::Euclid => {
            need_p2(p, "euclid")?;
            BuiltAlgebra {
                algebra: QuadraticAlgebra::tensor(field, 1).with_t(Some(TElement::Generator(0)))?,
                order_hint: vec![0],
            }
        }
        EtRecipe::FreeProd(a, b) => {
            let a = cohomology_node(a, field)?;
            let b = cohomology_node(b, field)?;
            let da = a.algebra.num_generators();
            BuiltAlgebra {
                algebra: a
                    .algebra
                    .combine(&b.algebra, CombineMode::DirectSum)?
                    .with_t(Some(TElement::Zero))?,
                order_hint: concat_orders(&a.order_hint, &b.order_hint, da),
            }
        }
        EtRecipe::Semidirect { m, base } => {
            let b = cohomology_node(base, field)?;
            let db = b.algebra.num_generators();
            let algebra = b.algebra.with_t(Some(TElement::Zero))?.twisted_extension(*m)?;
            BuiltAlgebra {
                algebra,
                order_hint: concat_orders(&b.order_hint, &identity(*m), db),
            }
        }
        EtRecipe::PfrFreeProd(a, b) => {
            need_p2(p, "pfr-freeprod")?;
            let a = cohomology_node(a, field)?;
            let b = cohomology_node(b, field)?;
            let (Some(TElement::Generator(ta)), Some(TElement::Generator(tb))) =
                (a.algebra.distinguished_t(), b.algebra.distinguished_t())
            else {
                return Err(Error::NoDistinguishedElement);
            };
            let da = a.algebra.num_generators();
            let d = da + b.algebra.num_generators();
            let sum = a.algebra.combine(&b.algebra, CombineMode::DirectSum)?;
            // new generator `t` replaces t_L: t_L = t + t_R over F_2
            let tb = da + tb;
            let mut m: Vec<Vec<u32>> = (0..d)
                .map(|i| (0..d).map(|j| (i == j) as u32).collect())
                .collect();
            m[ta][tb] = 1;
            let algebra = sum.change_basis(&m)?.with_t(Some(TElement::Generator(ta)))?;
            let hint = concat_orders(&a.order_hint, &b.order_hint, da);
            let order_hint = if hint.first() == Some(&ta) && is_pbw_order(&algebra, &hint) {
                hint
            } else {
                search_order(&algebra, vec![hint.clone()], Some(ta)).unwrap_or(hint)
            };
            BuiltAlgebra { algebra, order_hint }
        }
        EtRecipe::PfrSemidirect { m, base } => {
            need_p2(p, "pfr-semidirect")?;
            let b = cohomology_node(base, field)?;
            let db = b.algebra.num_generators();
            let algebra = b.algebra.twisted_extension(*m)?;
            BuiltAlgebra {
                algebra,
                order_hint: concat_orders(&b.order_hint, &identity(*m), db),
            }
        }
    })
}

pub(crate) fn is_pbw_order(a: &QuadraticAlgebra, asc: &[usize]) -> bool {
    let Ok(order) = DeglexOrder::from_ascending(asc) else {
        return false;
    };
    crate::pbw::normalize_basis(a.relators(), &order)
        .map(|s| s.is_confluent().is_confluent())
        .unwrap_or(false)
}

fn cohomology_labels(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("chi{}", i)).collect()
}

fn group_labels(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("chi{}*", i)).collect()
}

/// Cohomology side with an order expected to be PBW.
pub fn build_cohomology_with_hint(r: &EtRecipe, p: u32) -> Result<BuiltAlgebra> {
    check_shape(r)?;
    let field = Fp::new(p as u64)?;
    let mut b = cohomology_node(r, field)?;
    let d = b.algebra.num_generators();
    b.algebra = b.algebra.with_labels(cohomology_labels(d))?;
    Ok(b)
}

/// The cohomology algebra described by a recipe, generators `chi1..chiD`
/// numbered depth first.
pub fn build_cohomology(r: &EtRecipe, p: u32) -> Result<QuadraticAlgebra> {
    Ok(build_cohomology_with_hint(r, p)?.algebra)
}

/// Initial form of the Demushkin relator, checked against the closed form.
pub fn demushkin_group_relation(
    d: usize,
    case: DemushkinCase,
    param: DemushkinParam,
    field: Fp,
) -> Result<NcPoly> {
    let word = demushkin_relator(d, case, param, field.p())?;
    let display = demushkin_display_form(d, case, field);
    let computed = initial_form(&word, field, d, DEFAULT_TRUNCATION)?;
    if computed.degree != 2 || computed.poly != display {
        return Err(Error::InternalInconsistency(format!(
            "initial form of degree {} differs from the closed form for case {}",
            computed.degree,
            case.name()
        )));
    }
    Ok(display)
}

fn group_node(r: &EtRecipe, field: Fp) -> Result<BuiltAlgebra> {
    Ok(match r {
        EtRecipe::Free(d) => BuiltAlgebra {
            algebra: QuadraticAlgebra::tensor(field, *d),
            order_hint: identity(*d),
        },
        EtRecipe::Demushkin { d, case, param } => {
            let rel = demushkin_group_relation(*d, *case, *param, field)?;
            let labels = (1..=*d).map(|i| format!("X{}", i)).collect();
            let algebra = QuadraticAlgebra::from_polys(field, labels, &[rel])?;
            let hint = one_relator_lemma_order(&algebra).unwrap_or_else(|| identity(*d));
            let order_hint = search_order(&algebra, vec![hint.clone()], None).unwrap_or(hint);
            BuiltAlgebra { algebra, order_hint }
        }
        EtRecipe::Euclid => {
            need_p2(field.p(), "euclid")?;
            BuiltAlgebra {
                algebra: QuadraticAlgebra::trivial(field, 1),
                order_hint: vec![0],
            }
        }
        EtRecipe::FreeProd(a, b) => {
            let a = group_node(a, field)?;
            let b = group_node(b, field)?;
            let da = a.algebra.num_generators();
            BuiltAlgebra {
                algebra: a.algebra.combine(&b.algebra, CombineMode::FreeProduct)?,
                order_hint: concat_orders(&a.order_hint, &b.order_hint, da),
            }
        }
        EtRecipe::Semidirect { m, base } => {
            let b = group_node(base, field)?;
            let db = b.algebra.num_generators();
            let poly = QuadraticAlgebra::symmetric(field, *m);
            BuiltAlgebra {
                algebra: b.algebra.combine(&poly, CombineMode::SymTensor)?,
                order_hint: concat_orders(&b.order_hint, &identity(*m), db),
            }
        }
        EtRecipe::PfrFreeProd(..) | EtRecipe::PfrSemidirect { .. } => {
            return Err(Error::Unsupported(
                "the graded group algebra side is only built for free, demushkin and euclid leaves and their elementary type combinations".into(),
            ))
        }
    })
}

pub fn build_group_side_with_hint(r: &EtRecipe, p: u32) -> Result<BuiltAlgebra> {
    check_shape(r)?;
    let field = Fp::new(p as u64)?;
    let mut b = group_node(r, field)?;
    let d = b.algebra.num_generators();
    b.algebra = b.algebra.with_labels(group_labels(d))?;
    Ok(b)
}

/// The graded group algebra side, generators `chi1*..chiD*`.
pub fn build_group_side(r: &EtRecipe, p: u32) -> Result<QuadraticAlgebra> {
    Ok(build_group_side_with_hint(r, p)?.algebra)
}
