//! Ordinary character tables with cyclotomic values, and the arrow counts
//! `dim Hom(S_μ, M ⊗ S_λ)` they determine.

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cyclotomic::Cyclotomic;
use super::{Arrow, ArrowLabel, BoundQuiver, Vertex};
use crate::action::AbelianGroupH;
use crate::charfield::Character;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassInfo {
    #[serde(default)]
    pub name: Option<String>,
    pub size: u64,
}

/// A character value as written in a table file: an integer, or a list of
/// `[coefficient, k]` terms meaning Σ coefficient·ζ^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Integer(i64),
    Terms(Vec<(i64, u64)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrreducibleSpec {
    pub name: String,
    pub values: Vec<ValueSpec>,
}

/// File form of a [`CharacterTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterTableSpec {
    /// m such that every value lies in ℚ(ζ_m)
    pub exponent: u64,
    pub classes: Vec<ClassInfo>,
    pub irreducibles: Vec<IrreducibleSpec>,
    /// character of M = J/J²
    pub module: Vec<ValueSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    exponent: u64,
    classes: Vec<ClassInfo>,
    names: Vec<String>,
    rows: Vec<Vec<Cyclotomic>>,
    module: Vec<Cyclotomic>,
}

fn value(m: u64, v: &ValueSpec) -> Cyclotomic {
    match v {
        ValueSpec::Integer(x) => Cyclotomic::from_integer(m, *x),
        ValueSpec::Terms(t) => Cyclotomic::from_terms(m, t),
    }
}

impl TryFrom<CharacterTableSpec> for CharacterTable {
    type Error = Error;

    fn try_from(spec: CharacterTableSpec) -> Result<Self> {
        if spec.exponent == 0 || spec.exponent > 1 << 12 {
            return Err(Error::InvalidInput(format!(
                "unsupported cyclotomic order {}",
                spec.exponent
            )));
        }
        let m = spec.exponent;
        let width = spec.classes.len();
        let to_row = |vals: &[ValueSpec], what: &str| -> Result<Vec<Cyclotomic>> {
            if vals.len() != width {
                return Err(Error::Shape(format!(
                    "{what} has {} values for {width} classes",
                    vals.len()
                )));
            }
            Ok(vals.iter().map(|v| value(m, v)).collect())
        };
        let rows = spec
            .irreducibles
            .iter()
            .map(|r| to_row(&r.values, &r.name))
            .collect::<Result<Vec<_>>>()?;
        let module = to_row(&spec.module, "module character")?;
        CharacterTable::new(
            m,
            spec.classes,
            spec.irreducibles.into_iter().map(|r| r.name).collect(),
            rows,
            module,
        )
    }
}

impl CharacterTable {
    /// Checks class sizes, degrees and row orthonormality.
    pub fn new(
        exponent: u64,
        classes: Vec<ClassInfo>,
        names: Vec<String>,
        rows: Vec<Vec<Cyclotomic>>,
        module: Vec<Cyclotomic>,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidInput("character table has no classes".into()));
        }
        if rows.len() != classes.len() || names.len() != rows.len() {
            return Err(Error::Shape(format!(
                "{} irreducibles for {} classes",
                rows.len(),
                classes.len()
            )));
        }
        if classes.iter().any(|c| c.size == 0) {
            return Err(Error::InvalidInput("class of size 0".into()));
        }
        let table = CharacterTable {
            exponent,
            classes,
            names,
            rows,
            module,
        };
        for (i, row) in table.rows.iter().enumerate() {
            let deg = row[0]
                .as_rational()
                .filter(|d| d.is_integer() && *d > Ratio::zero());
            if deg.is_none() {
                return Err(Error::InvalidInput(format!(
                    "irreducible {} does not have a positive integer degree",
                    table.names[i]
                )));
            }
            for (j, other) in table.rows.iter().enumerate() {
                let ip = table.inner_product(row, other)?;
                if ip != u64::from(i == j) {
                    return Err(Error::InvalidInput(format!(
                        "rows {} and {} have inner product {ip}",
                        table.names[i], table.names[j]
                    )));
                }
            }
        }
        table.inner_product(&table.module, &table.rows[0])?;
        Ok(table)
    }

    /// Table of an abelian group with one class per element (mixed-radix
    /// order) and `M` the sum of the given characters.
    pub fn from_abelian(h: &AbelianGroupH, module_chars: &[Character]) -> Result<Self> {
        let m = h.exponent();
        let elements: Vec<Vec<u64>> = h.elements().collect();
        let eval = |c: &Character, x: &[u64]| {
            let k: u64 =
                c.0.iter()
                    .zip(x)
                    .zip(h.orders())
                    .map(|((&a, &b), &d)| (a * b % d) * (m / d))
                    .sum();
            Cyclotomic::root_power(m, k % m)
        };
        let chars = h.characters();
        let rows = chars
            .iter()
            .map(|c| elements.iter().map(|x| eval(c, x)).collect())
            .collect();
        let module = elements
            .iter()
            .map(|x| {
                module_chars
                    .iter()
                    .fold(Cyclotomic::zero(m), |acc, c| acc.add(&eval(c, x)))
            })
            .collect();
        CharacterTable::new(
            m,
            elements
                .iter()
                .map(|_| ClassInfo {
                    name: None,
                    size: 1,
                })
                .collect(),
            chars.iter().map(|c| c.to_string()).collect(),
            rows,
            module,
        )
    }

    pub fn order(&self) -> u64 {
        self.classes.iter().map(|c| c.size).sum()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.rows[i]
    }

    pub fn module_character(&self) -> &[Cyclotomic] {
        &self.module
    }

    pub fn product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
    }

    /// `(1/|H|) Σ_C |C| · conj(χ(C)) · ψ(C)`, required to be a nonnegative integer.
    pub fn inner_product(&self, chi: &[Cyclotomic], psi: &[Cyclotomic]) -> Result<u64> {
        let m = self.exponent;
        let mut acc = Cyclotomic::zero(m);
        for ((c, x), y) in self.classes.iter().zip(chi).zip(psi) {
            acc = acc.add(&x.conj().mul(y).scale(Ratio::from_integer(c.size as i64)));
        }
        let v = acc
            .as_rational()
            .map(|r| r / Ratio::from_integer(self.order() as i64))
            .filter(|r| r.is_integer() && *r >= Ratio::zero())
            .ok_or_else(|| Error::NonIntegerResult(format!("{acc:?} / {}", self.order())))?;
        Ok(v.to_integer() as u64)
    }

    /// `counts[λ][μ] = ⟨μ, χ_M · λ⟩`.
    pub fn arrow_counts(&self) -> Result<Vec<Vec<u64>>> {
        self.rows
            .iter()
            .map(|lambda| {
                let twisted = self.product(&self.module, lambda);
                self.rows
                    .iter()
                    .map(|mu| self.inner_product(mu, &twisted))
                    .collect()
            })
            .collect()
    }
}

/// Quiver with one vertex per irreducible and no relations. Parallel arrows
/// between the same pair get labels `(0, 1), (0, 2), …`.
pub fn quiver_from_character_table(table: &CharacterTable) -> Result<BoundQuiver> {
    let counts = table.arrow_counts()?;
    let mut arrows = Vec::new();
    for (s, row) in counts.iter().enumerate() {
        for (t, &c) in row.iter().enumerate() {
            for j in 1..=c as usize {
                arrows.push(Arrow {
                    id: arrows.len(),
                    source: s,
                    target: t,
                    label: ArrowLabel {
                        exponent: 0,
                        index: j,
                    },
                });
            }
        }
    }
    Ok(BoundQuiver {
        p: None,
        h_orders: Vec::new(),
        vertices: table.names.iter().cloned().map(Vertex::Named).collect(),
        labels: Vec::new(),
        arrows,
        relations: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> CharacterTable {
        let spec: CharacterTableSpec = serde_json::from_str(
            r#"{
                "exponent": 6,
                "classes": [{"name": "1", "size": 1}, {"name": "(12)", "size": 3}, {"name": "(123)", "size": 2}],
                "irreducibles": [
                    {"name": "triv", "values": [1, 1, 1]},
                    {"name": "std", "values": [2, 0, -1]},
                    {"name": "sgn", "values": [1, -1, 1]}
                ],
                "module": [3, 1, 0]
            }"#,
        )
        .unwrap();
        CharacterTable::try_from(spec).unwrap()
    }

    #[test]
    fn s3_inner_products() {
        let t = s3();
        assert_eq!(t.inner_product(t.row(1), t.row(1)).unwrap(), 1);
        let twisted = t.product(t.module_character(), t.row(1));
        assert_eq!(t.inner_product(t.row(1), &twisted).unwrap(), 2);
        assert_eq!(t.inner_product(t.row(0), t.row(2)).unwrap(), 0);
    }

    #[test]
    fn s3_quiver() {
        let t = s3();
        assert_eq!(
            t.arrow_counts().unwrap(),
            vec![vec![1, 1, 0], vec![1, 2, 1], vec![0, 1, 1]]
        );
        let q = quiver_from_character_table(&t).unwrap();
        assert!(q.is_quiver_only());
        assert_eq!(q.arrows.len(), 8);
    }

    #[test]
    fn c3_with_nontrivial_module() {
        let h = AbelianGroupH::new(vec![3]).unwrap();
        let t =
            CharacterTable::from_abelian(&h, &[Character(vec![1]), Character(vec![2])]).unwrap();
        assert_eq!(
            t.arrow_counts().unwrap(),
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
    }

    #[test]
    fn trivial_module_gives_loops() {
        let h = AbelianGroupH::new(vec![2, 2]).unwrap();
        let triv = Character::trivial(&h);
        let t = CharacterTable::from_abelian(&h, &[triv.clone(), triv.clone(), triv]).unwrap();
        let counts = t.arrow_counts().unwrap();
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, if i == j { 3 } else { 0 });
            }
        }
    }

    #[test]
    fn non_orthogonal_rows_rejected() {
        let mut spec: CharacterTableSpec = serde_json::from_str(
            r#"{"exponent": 2, "classes": [{"size": 1}, {"size": 1}],
                "irreducibles": [{"name": "a", "values": [1, 1]}, {"name": "b", "values": [1, 1]}],
                "module": [1, 1]}"#,
        )
        .unwrap();
        assert!(CharacterTable::try_from(spec.clone()).is_err());
        spec.irreducibles[1].values = vec![ValueSpec::Integer(1), ValueSpec::Terms(vec![(1, 1)])];
        assert!(CharacterTable::try_from(spec).is_ok());
    }

    #[test]
    fn non_integer_multiplicity() {
        let h = AbelianGroupH::new(vec![2]).unwrap();
        let t = CharacterTable::from_abelian(&h, &[]).unwrap();
        let half = vec![
            Cyclotomic::from_integer(2, 1),
            Cyclotomic::from_integer(2, 0),
        ];
        assert!(matches!(
            t.inner_product(t.row(0), &half),
            Err(Error::NonIntegerResult(_))
        ));
    }
}
