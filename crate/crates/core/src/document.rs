//! The JSON document format for measure spaces and named families.
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "measure_space": { "weights": [1.0, 1.0] },
//!   "families": {
//!     "lambda": { "domain_dim": 1, "block_dims": [1, 1], "blocks": [[[[1, 0]]], [[[0, 0]]]] }
//!   }
//! }
//! ```
//!
//! `blocks[i][r][c]` is the `[re, im]` entry in row `r`, column `c` of the
//! block at atom `i`. Parsing is strict: unknown keys, entries that are not
//! two-element arrays and shape mismatches are all rejected with the path of
//! the offending element.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CMatrix, GFrameFamily, MeasureSpace, C64};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub format_version: String,
    pub measure_space: MeasureSpaceEntry,
    pub families: BTreeMap<String, FamilyEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpaceEntry {
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub domain_dim: usize,
    pub block_dims: Vec<usize>,
    pub blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl FamilyEntry {
    pub fn from_family(fam: &GFrameFamily) -> Self {
        let blocks = fam
            .blocks()
            .iter()
            .map(|b| b.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect())
            .collect();
        Self { domain_dim: fam.domain_dim(), block_dims: fam.block_dims().to_vec(), blocks }
    }

    fn matrices(&self) -> Vec<CMatrix> {
        self.blocks
            .iter()
            .zip(&self.block_dims)
            .map(|(rows, &r)| {
                CMatrix::from_fn(r, self.domain_dim, |i, j| {
                    let [re, im] = rows[i][j];
                    C64::new(re, im)
                })
            })
            .collect()
    }
}

impl FrameDocument {
    pub fn new(space: &MeasureSpace) -> Self {
        Self {
            format_version: FORMAT_VERSION.to_owned(),
            measure_space: MeasureSpaceEntry { weights: space.weights().to_vec() },
            families: BTreeMap::new(),
        }
    }

    /// Builds a document from named families that share one measure space
    /// and block layout.
    pub fn from_families<'a>(families: impl IntoIterator<Item = (&'a str, &'a GFrameFamily)>) -> Result<Self> {
        let mut iter = families.into_iter().peekable();
        let first = iter.peek().ok_or_else(|| Error::shape("a document needs at least one family"))?;
        let mut doc = Self::new(first.1.space());
        for (name, fam) in iter {
            doc.insert(name, fam)?;
        }
        Ok(doc)
    }

    /// Adds or replaces a family. It must share the document's measure
    /// space and the block dims of the families already present.
    pub fn insert(&mut self, name: &str, fam: &GFrameFamily) -> Result<()> {
        if fam.weights() != self.measure_space.weights.as_slice() {
            return Err(Error::shape(format!("family `{name}` lives over a different measure space")));
        }
        if let Some((other, e)) = self.families.iter().find(|(n, _)| n.as_str() != name) {
            if e.block_dims != fam.block_dims() {
                return Err(Error::shape(format!("family `{name}` has different block dims than `{other}`")));
            }
        }
        self.families.insert(name.to_owned(), FamilyEntry::from_family(fam));
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: FrameDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Parse {
                path: if path == "." || path == "?" { "document".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn space(&self) -> Result<MeasureSpace> {
        MeasureSpace::new(self.measure_space.weights.clone())
    }

    pub fn family_names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(String::as_str)
    }

    pub fn family(&self, name: &str) -> Result<GFrameFamily> {
        let entry = self.families.get(name).ok_or_else(|| Error::UnknownFamily(name.to_owned()))?;
        GFrameFamily::new(self.space()?, entry.domain_dim, entry.matrices())
    }

    fn validate(&self) -> Result<()> {
        let fail = |path: String, message: String| Err(Error::Parse { path, message });
        if self.format_version != FORMAT_VERSION {
            return fail(
                "format_version".into(),
                format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", self.format_version),
            );
        }
        let weights = &self.measure_space.weights;
        if weights.is_empty() {
            return fail("measure_space.weights".into(), "at least one atom is required".into());
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return fail(format!("measure_space.weights[{i}]"), format!("weight must be positive, got {w}"));
            }
        }

        let mut shared: Option<(&str, &[usize])> = None;
        for (name, fam) in &self.families {
            let at = |suffix: &str| format!("families.{name}.{suffix}");
            if fam.domain_dim == 0 {
                return fail(at("domain_dim"), "domain dimension must be at least 1".into());
            }
            if fam.block_dims.len() != weights.len() {
                return fail(
                    at("block_dims"),
                    format!("{} block dims for {} atoms", fam.block_dims.len(), weights.len()),
                );
            }
            if let Some(i) = fam.block_dims.iter().position(|&r| r == 0) {
                return fail(at(&format!("block_dims[{i}]")), "block dimension must be at least 1".into());
            }
            if fam.blocks.len() != weights.len() {
                return fail(at("blocks"), format!("{} blocks for {} atoms", fam.blocks.len(), weights.len()));
            }
            for (i, (rows, &r)) in fam.blocks.iter().zip(&fam.block_dims).enumerate() {
                if rows.len() != r {
                    return fail(
                        at(&format!("blocks[{i}]")),
                        format!("family `{name}`, atom {i}: expected {r} rows, found {}", rows.len()),
                    );
                }
                for (k, row) in rows.iter().enumerate() {
                    if row.len() != fam.domain_dim {
                        return fail(
                            at(&format!("blocks[{i}][{k}]")),
                            format!(
                                "family `{name}`, atom {i}: expected {} columns, found {}",
                                fam.domain_dim,
                                row.len()
                            ),
                        );
                    }
                }
            }
            match shared {
                Some((other, dims)) if dims != fam.block_dims.as_slice() => {
                    return fail(at("block_dims"), format!("block dims differ from those of family `{other}`"));
                }
                None => shared = Some((name, &fam.block_dims)),
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = r#"{
        "format_version": "1",
        "measure_space": {"weights": [1]},
        "families": {"lam": {"domain_dim": 1, "block_dims": [1], "blocks": [[[[1, 0]]]]}}
    }"#;

    fn parse_err(text: &str) -> (String, String) {
        match FrameDocument::parse(text) {
            Err(Error::Parse { path, message }) => (path, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document_parses() {
        let doc = FrameDocument::parse(MINIMAL).unwrap();
        let fam = doc.family("lam").unwrap();
        assert_eq!(fam.block(0)[(0, 0)], C64::new(1.0, 0.0));
        assert!(matches!(doc.family("nope"), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn zero_weight_is_reported_by_path() {
        let (path, _) = parse_err(&MINIMAL.replace(r#""weights": [1]"#, r#""weights": [0]"#));
        assert_eq!(path, "measure_space.weights[0]");
    }

    #[test]
    fn wrong_column_count_names_family_and_atom() {
        let (path, message) = parse_err(&MINIMAL.replace("[[[[1, 0]]]]", "[[[[1, 0], [2, 0]]]]"));
        assert_eq!(path, "families.lam.blocks[0][0]");
        assert!(message.contains("`lam`") && message.contains("atom 0"));
    }

    #[test]
    fn strictness() {
        let (path, _) = parse_err(&MINIMAL.replace(r#""domain_dim": 1"#, r#""domain_dim": 1, "extra": 2"#));
        assert_eq!(path, "families.lam.extra");
        let (path, _) = parse_err(&MINIMAL.replace("[[[[1, 0]]]]", "[[[[1, 0, 0]]]]"));
        assert_eq!(path, "families.lam.blocks[0][0][0]");
        let (path, _) = parse_err(&MINIMAL.replace("[[[[1, 0]]]]", r#"[[[["1", 0]]]]"#));
        assert!(path.starts_with("families.lam.blocks[0][0][0]"));
        let (path, _) = parse_err(&MINIMAL.replace(r#""1""#, r#""2""#));
        assert_eq!(path, "format_version");
        let (path, _) = parse_err("{");
        assert_eq!(path, "document");
    }

    #[test]
    fn families_must_share_block_dims() {
        let text = r#"{
            "format_version": "1",
            "measure_space": {"weights": [1]},
            "families": {
                "a": {"domain_dim": 1, "block_dims": [1], "blocks": [[[[1, 0]]]]},
                "b": {"domain_dim": 1, "block_dims": [2], "blocks": [[[[1, 0]], [[0, 0]]]]}
            }
        }"#;
        let (path, _) = parse_err(text);
        assert_eq!(path, "families.b.block_dims");
    }

    #[test]
    fn insert_guards_layout() {
        let a = GFrameFamily::from_real(&[1.0], 1, &[&[1.0]]).unwrap();
        let b = GFrameFamily::from_real(&[2.0], 1, &[&[1.0]]).unwrap();
        let c = GFrameFamily::from_real(&[1.0], 1, &[&[1.0, 2.0]]).unwrap();
        let mut doc = FrameDocument::from_families([("a", &a)]).unwrap();
        assert!(doc.insert("b", &b).is_err());
        assert!(doc.insert("c", &c).is_err());
        assert!(doc.insert("a", &c).is_ok());
    }

    fn arb_doc() -> impl Strategy<Value = FrameDocument> {
        (1usize..4, 1usize..4, 1usize..3)
            .prop_flat_map(|(atoms, d, fams)| {
                let weights = prop::collection::vec(0.01f64..10.0, atoms);
                let dims = prop::collection::vec(1usize..3, atoms);
                (weights, dims, Just(d), Just(fams), any::<u64>())
            })
            .prop_map(|(weights, dims, d, fams, seed)| {
                let space = MeasureSpace::new(weights).unwrap();
                let mut rng = crate::random::seeded(seed);
                let mut doc = FrameDocument::new(&space);
                for k in 0..fams {
                    let blocks = dims.iter().map(|&r| crate::random::gaussian_matrix(&mut rng, r, d + k)).collect();
                    let fam = GFrameFamily::new(space.clone(), d + k, blocks).unwrap();
                    doc.insert(&format!("f{k}"), &fam).unwrap();
                }
                doc
            })
    }

    proptest! {
        #[test]
        fn round_trip(doc in arb_doc()) {
            let text = doc.to_json();
            let back = FrameDocument::parse(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            for name in doc.family_names() {
                prop_assert_eq!(back.family(name).unwrap(), doc.family(name).unwrap());
            }
        }
    }
}
