//! The JSON presentation file.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use koszul_core::graded::QuadraticPresentation;
use koszul_core::twisting::{FamilyRole, TwistingMatrixFamily};
use koszul_core::{Field, FieldSpec, Matrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: String,
    pub word: Word,
}

/// A word of length exactly two.
#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(transparent)]
pub struct Word(pub [String; 2]);

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        match <[String; 2]>::try_from(v) {
            Ok(w) => Ok(Word(w)),
            Err(v) => Err(de::Error::invalid_length(v.len(), &"a word of exactly two generators")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SecondPresentation {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<Vec<Term>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TwistBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<SecondPresentation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<SigmaEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyBlock>,
}

/// `σ(b ⊗ a) = Σ coeff·(a' ⊗ b')`, with `source = [b, a]` and image words `[a', b']`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SigmaEntry {
    pub source: Word,
    pub image: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyBlock {
    pub role: String,
    pub entries: Vec<Vec<FamilyEntry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FamilyEntry {
    /// `s^{deg}·Id`.
    Scale { scale: String },
    /// Zero in every degree.
    Zero { zero: bool },
    /// Per-degree matrices, degree 0 first; rows of coefficient strings.
    Matrices { matrices: Vec<Vec<Vec<String>>> },
}

/// Input problems; always exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

pub fn parse_input(bytes: &[u8]) -> Result<InputFile, InputError> {
    let file: InputFile = serde_json::from_slice(bytes).map_err(|e| {
        InputError(format!("line {}, column {}: {}", e.line(), e.column(), e))
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return err(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", file.schema_version));
    }
    Ok(file)
}

/// The field from the command line, else the file, else the rationals.
pub fn resolve_field(file: &InputFile, flag: Option<&str>) -> Result<FieldSpec, InputError> {
    let s = flag.or(file.field.as_deref()).unwrap_or("rational");
    s.parse().map_err(|e: koszul_core::Error| InputError(e.to_string()))
}

fn index_of(names: &[String], name: &str, ctx: &str) -> Result<usize, InputError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| InputError(format!("{ctx}: unknown generator `{name}`")))
}

fn coeff<F: Field>(f: &F, s: &str, ctx: &str) -> Result<F::Elem, InputError> {
    f.parse(s).map_err(|e| InputError(format!("{ctx}: {e}")))
}

pub fn build_presentation<F: Field>(
    f: &F,
    generators: &[String],
    relations: &[Vec<Term>],
    label: &str,
) -> Result<QuadraticPresentation<F>, InputError> {
    let mut rels = Vec::with_capacity(relations.len());
    for (k, rel) in relations.iter().enumerate() {
        let ctx = format!("{label} relation {k}");
        let mut terms = Vec::with_capacity(rel.len());
        for t in rel {
            let i = index_of(generators, &t.word.0[0], &ctx)?;
            let j = index_of(generators, &t.word.0[1], &ctx)?;
            terms.push((coeff(f, &t.coeff, &ctx)?, (i, j)));
        }
        rels.push(terms);
    }
    let names: Vec<&str> = generators.iter().map(String::as_str).collect();
    QuadraticPresentation::from_terms(f, &names, &rels).map_err(|e| InputError(format!("{label}: {e}")))
}

/// `s11: B¹ ⊗ A¹ → A¹ ⊗ B¹`; unlisted sources go to the flip.
pub fn build_sigma<F: Field>(
    f: &F,
    a_names: &[String],
    b_names: &[String],
    entries: &[SigmaEntry],
) -> Result<Matrix<F>, InputError> {
    let (ga, gb) = (a_names.len(), b_names.len());
    let mut m = koszul_core::tensor::swap(f, gb, ga);
    let mut seen = std::collections::BTreeSet::new();
    for (k, e) in entries.iter().enumerate() {
        let ctx = format!("sigma entry {k}");
        let b = index_of(b_names, &e.source.0[0], &format!("{ctx} source"))?;
        let a = index_of(a_names, &e.source.0[1], &format!("{ctx} source"))?;
        if !seen.insert((b, a)) {
            return err(format!("{ctx}: source listed twice"));
        }
        let col = b * ga + a;
        for r in 0..ga * gb {
            m.set(r, col, f.zero());
        }
        for t in &e.image {
            let a2 = index_of(a_names, &t.word.0[0], &format!("{ctx} image"))?;
            let b2 = index_of(b_names, &t.word.0[1], &format!("{ctx} image"))?;
            let v = f.add(m.get(a2 * gb + b2, col), &coeff(f, &t.coeff, &ctx)?);
            m.set(a2 * gb + b2, col, v);
        }
    }
    Ok(m)
}

pub fn parse_role(s: &str) -> Result<FamilyRole, InputError> {
    match s {
        "sigma" => Ok(FamilyRole::Sigma),
        "tau" => Ok(FamilyRole::Tau),
        "lambda" => Ok(FamilyRole::Lambda),
        _ => err(format!("unknown family role `{s}` (expected sigma, tau or lambda)")),
    }
}

pub fn build_family<F: Field>(f: &F, block: &FamilyBlock, dims: &[usize]) -> Result<TwistingMatrixFamily<F>, InputError> {
    let role = parse_role(&block.role)?;
    let n = block.entries.len();
    if n == 0 || block.entries.iter().any(|r| r.len() != n) {
        return err("family entries must form a non-empty square array");
    }
    let mut entries = Vec::with_capacity(n);
    for (i, row) in block.entries.iter().enumerate() {
        let mut out_row = Vec::with_capacity(n);
        for (j, e) in row.iter().enumerate() {
            let ctx = format!("family entry ({i}, {j})");
            let per_degree: Vec<Matrix<F>> = match e {
                FamilyEntry::Scale { scale } => {
                    let s = coeff(f, scale, &ctx)?;
                    dims.iter()
                        .enumerate()
                        .map(|(d, &dim)| {
                            let c = f.pow(&s, d as i64).unwrap_or_else(|| f.zero());
                            Matrix::identity(f, dim).scale(&c)
                        })
                        .collect()
                }
                FamilyEntry::Zero { .. } => dims.iter().map(|&dim| Matrix::zeros(f, dim, dim)).collect(),
                FamilyEntry::Matrices { matrices } => {
                    if matrices.len() < dims.len() {
                        return err(format!("{ctx}: {} degrees given, {} needed", matrices.len(), dims.len()));
                    }
                    let mut out = Vec::with_capacity(dims.len());
                    for (d, &dim) in dims.iter().enumerate() {
                        let rows = &matrices[d];
                        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                            return err(format!("{ctx}: degree {d} must be {dim}×{dim}"));
                        }
                        let vals = rows
                            .iter()
                            .map(|r| r.iter().map(|s| coeff(f, s, &ctx)).collect::<Result<Vec<_>, _>>())
                            .collect::<Result<Vec<_>, _>>()?;
                        out.push(Matrix::from_rows(f, dim, vals));
                    }
                    out
                }
            };
            out_row.push(per_degree);
        }
        entries.push(out_row);
    }
    Ok(TwistingMatrixFamily { role, n, entries })
}

/// Serializes a presentation back into the file schema.
pub fn terms_of<F: Field>(p: &QuadraticPresentation<F>) -> Vec<Vec<Term>> {
    let f = p.field();
    let g = p.n_gen();
    let names = p.generator_names();
    let w = p.relations().basis();
    (0..w.cols())
        .map(|k| {
            (0..g * g)
                .filter(|&idx| !f.is_zero(w.get(idx, k)))
                .map(|idx| Term {
                    coeff: f.format(w.get(idx, k)),
                    word: Word([names[idx / g].clone(), names[idx % g].clone()]),
                })
                .collect()
        })
        .collect()
}
