use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::Subspace;

use super::algebra::{QuadraticAlgebra, TElement};

/// One term of a relator in the algebra file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorTerm {
    pub monomial: [String; 2],
    pub coeff: i64,
}

/// On-disk form of a quadratic algebra. `t` names a generator, or is `"0"`
/// for the zero slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub p: u32,
    pub generators: Vec<String>,
    pub relators: Vec<Vec<RelatorTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

impl AlgebraFile {
    /// Relators are written as the canonical RREF rows.
    pub fn from_algebra(a: &QuadraticAlgebra) -> Self {
        let d = a.num_generators();
        let labels = a.labels();
        let relators = a
            .relators()
            .basis()
            .row_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| RelatorTerm {
                        monomial: [labels[k / d].clone(), labels[k % d].clone()],
                        coeff: c as i64,
                    })
                    .collect()
            })
            .collect();
        let t = a.distinguished_t().map(|t| match t {
            TElement::Zero => "0".to_string(),
            TElement::Generator(g) => labels[g].clone(),
        });
        AlgebraFile {
            p: a.p(),
            generators: labels.to_vec(),
            relators,
            t,
        }
    }

    pub fn to_algebra(&self) -> Result<QuadraticAlgebra> {
        let field = Fp::new(self.p as u64)?;
        let d = self.generators.len();
        let index = |name: &str| {
            self.generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown generator '{}'", name)))
        };
        let mut rows = Vec::with_capacity(self.relators.len());
        for rel in &self.relators {
            let mut v = vec![0u32; d * d];
            for term in rel {
                let i = index(&term.monomial[0])?;
                let j = index(&term.monomial[1])?;
                v[i * d + j] = field.add(v[i * d + j], field.from_i64(term.coeff));
            }
            rows.push(v);
        }
        let a = QuadraticAlgebra::new(field, self.generators.clone(), Subspace::span(field, d * d, &rows))?;
        let t = match self.t.as_deref() {
            None => None,
            Some("0") => Some(TElement::Zero),
            Some(name) => Some(TElement::Generator(index(name)?)),
        };
        a.with_t(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

impl QuadraticAlgebra {
    pub fn to_json(&self) -> String {
        AlgebraFile::from_algebra(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        AlgebraFile::from_json(text)?.to_algebra()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_round_trip_is_exact() {
        let f = Fp::new(3).unwrap();
        let e = QuadraticAlgebra::exterior(f, 3).with_t(Some(TElement::Zero)).unwrap();
        let text = e.to_json();
        let back = QuadraticAlgebra::from_json(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn noncanonical_input_is_canonicalized() {
        let text = r#"{"p": 2, "generators": ["t", "x"],
            "relators": [[{"monomial": ["x","t"], "coeff": 1}, {"monomial": ["t","x"], "coeff": -1}],
                         [{"monomial": ["x","t"], "coeff": 3}]],
            "t": "t"}"#;
        let a = QuadraticAlgebra::from_json(text).unwrap();
        assert_eq!(a.relators().dim(), 2);
        assert_eq!(a.distinguished_t(), Some(TElement::Generator(0)));
    }

    #[test]
    fn bad_files_are_rejected() {
        assert!(QuadraticAlgebra::from_json("{\"p\": 4, \"generators\": [], \"relators\": []}").is_err());
        let unknown = r#"{"p": 2, "generators": ["a"], "relators": [[{"monomial": ["a","b"], "coeff": 1}]]}"#;
        assert!(matches!(QuadraticAlgebra::from_json(unknown), Err(Error::InvalidInput(_))));
        assert!(matches!(QuadraticAlgebra::from_json("{"), Err(Error::Parse { .. })));
    }
}
