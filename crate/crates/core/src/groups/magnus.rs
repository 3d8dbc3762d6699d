use crate::error::{Error, Result};
use crate::field::Fp;
use crate::tensor::{NcPoly, TruncSeries};

use super::word::GroupWord;

/// Image of a word under `x_i -> 1 + X_i`, truncated above degree `n`.
pub fn magnus_expand(w: &GroupWord, field: Fp, d: usize, n: usize) -> Result<TruncSeries> {
    Ok(match w {
        GroupWord::Gen(i) => {
            if *i >= d {
                return Err(Error::InvalidInput(format!(
                    "generator {} used with only {} generators",
                    i + 1,
                    d
                )));
            }
            TruncSeries::one_plus_generator(field, d, *i, n)
        }
        GroupWord::Inverse(inner) => magnus_expand(inner, field, d, n)?.inverse()?,
        GroupWord::Power(inner, e) => {
            let base = magnus_expand(inner, field, d, n)?;
            let base = if *e < 0 { base.inverse()? } else { base };
            base.pow(e.unsigned_abs())
        }
        GroupWord::Commutator(a, b) => {
            let ma = magnus_expand(a, field, d, n)?;
            let mb = magnus_expand(b, field, d, n)?;
            ma.inverse()?
                .mul(&mb.inverse()?)
                .mul(&ma)
                .mul(&mb)
        }
        GroupWord::Product(ws) => {
            let mut acc = TruncSeries::one(field, d, n);
            for x in ws {
                acc = acc.mul(&magnus_expand(x, field, d, n)?);
            }
            acc
        }
    })
}

/// Lowest-degree homogeneous part of `mu(w) - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialForm {
    pub degree: usize,
    pub poly: NcPoly,
}

/// Find the initial form, raising the truncation one degree at a time up to
/// `n`. Lower-degree parts of a truncated product never depend on the
/// truncation, so the answer equals the one computed at truncation `n`.
pub fn initial_form(w: &GroupWord, field: Fp, d: usize, n: usize) -> Result<InitialForm> {
    for k in 1..=n {
        let s = magnus_expand(w, field, d, k)?;
        let mut u = s.into_poly();
        u.add_term(crate::tensor::MultiIndex::empty(), field.neg(1));
        if let Some(deg) = u.min_degree() {
            return Ok(InitialForm {
                degree: deg,
                poly: u.homogeneous_part(deg),
            });
        }
    }
    Err(Error::TruncationTooLow(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DEFAULT_TRUNCATION;
    use proptest::prelude::*;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn labels(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("x{}", i)).collect()
    }

    fn caps(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("X{}", i)).collect()
    }

    fn word(s: &str, d: usize) -> GroupWord {
        GroupWord::parse(s, &labels(d)).unwrap()
    }

    #[test]
    fn generator_and_power() {
        let s = magnus_expand(&GroupWord::Gen(0), f(3), 1, 4).unwrap();
        assert_eq!(s.poly().render(&caps(1)), "1 + X1");
        let s = magnus_expand(&word("x1^3", 1), f(3), 1, 4).unwrap();
        assert_eq!(s.poly().render(&caps(1)), "1 + X1*X1*X1");
    }

    #[test]
    fn commutator_to_degree_three() {
        let s = magnus_expand(&word("[x1,x2]", 2), f(5), 2, 3).unwrap();
        assert_eq!(
            s.poly().homogeneous_part(2).render(&caps(2)),
            "X1*X2 + 4*X2*X1"
        );
        // degree-3 part from expanding (1 - X1 + X1^2)(1 - X2 + X2^2)(1 + X1)(1 + X2)
        let expect = NcPoly::parse(
            "-X1*X1*X2 + X1*X2*X1 - X2*X1*X2 + X2*X2*X1",
            f(5),
            &caps(2),
        )
        .unwrap();
        assert_eq!(s.poly().homogeneous_part(3), expect);
        assert_eq!(s.poly().constant_term(), 1);
        assert!(s.poly().homogeneous_part(1).is_zero());
    }

    #[test]
    fn demushkin_initial_forms() {
        let w = word("x1^3*[x1,x2]*[x3,x4]", 4);
        let form = initial_form(&w, f(3), 4, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(form.degree, 2);
        assert_eq!(
            form.poly.render(&caps(4)),
            "X1*X2 + 2*X2*X1 + X3*X4 + 2*X4*X3"
        );
        let w = word("x1^2*x2^4*[x2,x3]", 3);
        let form = initial_form(&w, f(2), 3, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(form.poly.render(&caps(3)), "X1*X1 + X2*X3 + X3*X2");
    }

    #[test]
    fn pth_power_has_degree_p() {
        let form = initial_form(&word("x1^5", 1), f(5), 1, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(form.degree, 5);
        assert_eq!(
            initial_form(&word("x1^7", 1), f(7), 1, 6).unwrap_err(),
            Error::TruncationTooLow(6)
        );
    }

    fn random_word(d: usize) -> impl Strategy<Value = GroupWord> {
        let leaf = (0..d).prop_map(GroupWord::Gen);
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(GroupWord::inverse),
                (inner.clone(), -3i64..4).prop_map(|(w, e)| GroupWord::power(w, e)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| GroupWord::comm(a, b)),
                prop::collection::vec(inner, 0..3).prop_map(GroupWord::Product),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn magnus_is_multiplicative(a in random_word(2), b in random_word(2)) {
            let fld = f(3);
            let n = 4;
            let ab = GroupWord::product(vec![a.clone(), b.clone()]);
            let ma = magnus_expand(&a, fld, 2, n).unwrap();
            let mb = magnus_expand(&b, fld, 2, n).unwrap();
            prop_assert_eq!(magnus_expand(&ab, fld, 2, n).unwrap(), ma.mul(&mb));
            let inv = magnus_expand(&GroupWord::inverse(a.clone()), fld, 2, n).unwrap();
            prop_assert_eq!(inv.mul(&ma), TruncSeries::one(fld, 2, n));
        }

        #[test]
        fn zassenhaus_degree_bounds(a in random_word(3), b in random_word(3)) {
            let fld = f(2);
            let n = 6;
            let da = initial_form(&a, fld, 3, n).map(|x| x.degree).unwrap_or(n + 1);
            let db = initial_form(&b, fld, 3, n).map(|x| x.degree).unwrap_or(n + 1);
            let c = GroupWord::comm(a.clone(), b);
            match initial_form(&c, fld, 3, n) {
                Ok(form) => prop_assert!(form.degree >= da + db),
                Err(Error::TruncationTooLow(_)) => {}
                Err(e) => return Err(TestCaseError::fail(format!("{:?}", e))),
            }
            let pw = GroupWord::power(a, 2);
            match initial_form(&pw, fld, 3, n) {
                Ok(form) => prop_assert!(form.degree >= 2 * da),
                Err(Error::TruncationTooLow(_)) => {}
                Err(e) => return Err(TestCaseError::fail(format!("{:?}", e))),
            }
        }
    }
}
