//! `.ssm` model container.
//!
//! ```text
//! magic    8 bytes  "SSMODEL\0"
//! version  u32
//! meta_len u64, then meta_len bytes of JSON (kind, config, column metadata)
//! blocks   tag [u8; 4], len u64, payload
//! ```
//!
//! Blocks appear in a fixed order: `STD0` and optional `PCA0` for the main
//! feature space, the same pair for a separate cascade level-1 space, then
//! one `FRST` (multi-class) or three (cascade level 1, group 1, group 2).
//! Integers are little-endian; reals are IEEE-754 f64.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Classifier, FeatureSpace, ModelError, PipelineConfig, TrainedModel};
use crate::features::{ColumnMeta, FeatureConfig, StandardizationStats};
use crate::mlcore::{DecisionTree, Forest, Matrix, Node, PcaModel};

pub const MAGIC: &[u8; 8] = b"SSMODEL\0";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Meta {
    kind: String,
    config: PipelineConfig,
    column_meta: Vec<ColumnMeta>,
    main_pca: bool,
    level1: Option<Level1Meta>,
    n_training_rows: usize,
}

#[derive(Serialize, Deserialize)]
struct Level1Meta {
    config: FeatureConfig,
    column_meta: Vec<ColumnMeta>,
    pca: bool,
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64s(&mut self, v: &[f64]) {
        v.iter().for_each(|&x| self.f64(x));
    }

    fn block(&mut self, tag: &[u8; 4], body: impl FnOnce(&mut Writer)) {
        let mut inner = Writer(Vec::new());
        body(&mut inner);
        self.0.extend_from_slice(tag);
        self.u64(inner.0.len() as u64);
        self.0.extend_from_slice(&inner.0);
    }

    fn standardizer(&mut self, s: &StandardizationStats) {
        self.block(b"STD0", |w| {
            w.u64(s.len() as u64);
            w.f64s(&s.mean);
            w.f64s(&s.scale);
        });
    }

    fn pca(&mut self, p: &PcaModel) {
        self.block(b"PCA0", |w| {
            w.u64(p.k() as u64);
            w.u64(p.d() as u64);
            w.f64s(&p.mean);
            w.f64s(p.components.as_slice());
            w.f64s(&p.explained_variance);
        });
    }

    fn forest(&mut self, f: &Forest) {
        self.block(b"FRST", |w| {
            w.u32(f.n_classes as u32);
            w.u64(f.n_features as u64);
            w.u64(f.max_features as u64);
            w.u64(f.seed);
            w.u64(f.trees.len() as u64);
            for t in &f.trees {
                w.u64(t.nodes.len() as u64);
                for n in &t.nodes {
                    match n {
                        Node::Leaf { counts } => {
                            w.u8(0);
                            counts.iter().for_each(|&c| w.u32(c));
                        }
                        Node::Split {
                            feature,
                            threshold,
                            left,
                            right,
                        } => {
                            w.u8(1);
                            w.u32(*feature);
                            w.f64(*threshold);
                            w.u32(*left);
                            w.u32(*right);
                        }
                    }
                }
            }
        });
    }

    fn space(&mut self, s: &FeatureSpace) {
        self.standardizer(&s.standardizer);
        if let Some(p) = &s.pca {
            self.pca(p);
        }
    }
}

pub fn encode_model(m: &TrainedModel) -> Vec<u8> {
    let level1 = match &m.classifier {
        Classifier::Cascade {
            level1_space: Some(s), ..
        } => Some(Level1Meta {
            config: s.config.clone(),
            column_meta: s.column_meta.clone(),
            pca: s.pca.is_some(),
        }),
        _ => None,
    };
    let meta = Meta {
        kind: m.kind().into(),
        config: m.config.clone(),
        column_meta: m.space.column_meta.clone(),
        main_pca: m.space.pca.is_some(),
        level1,
        n_training_rows: m.n_training_rows,
    };
    let json = serde_json::to_vec(&meta).expect("model metadata serializes");
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u32(FORMAT_VERSION);
    w.u64(json.len() as u64);
    w.0.extend_from_slice(&json);
    w.space(&m.space);
    match &m.classifier {
        Classifier::Multiclass(f) => w.forest(f),
        Classifier::Cascade {
            level1_space,
            level1,
            group1,
            group2,
        } => {
            if let Some(s) = level1_space {
                w.space(s);
            }
            w.forest(level1);
            w.forest(group1);
            w.forest(group2);
        }
    }
    w.0
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn corrupt(&self, message: impl Into<String>) -> ModelError {
        ModelError::Corrupt {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            self.corrupt(format!(
                "truncated: need {n} bytes, {} available",
                self.bytes.len() - self.pos
            ))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, ModelError> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32, ModelError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, ModelError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64, ModelError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// A length that must fit in the remaining bytes at `unit` bytes each.
    fn len(&mut self, unit: usize) -> Result<usize, ModelError> {
        let at = self.pos;
        let n = self.u64()?;
        let remaining = (self.bytes.len() - self.pos) as u64;
        if n.checked_mul(unit.max(1) as u64).map_or(true, |b| b > remaining) {
            return Err(ModelError::Corrupt {
                offset: at,
                message: format!("count {n} exceeds remaining {remaining} bytes"),
            });
        }
        Ok(n as usize)
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, ModelError> {
        let raw = self.take(n.checked_mul(8).ok_or_else(|| self.corrupt("length overflow"))?)?;
        Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    /// Enter a block with the expected tag; returns a reader over its payload.
    fn block(&mut self, tag: &[u8; 4]) -> Result<Reader<'a>, ModelError> {
        let at = self.pos;
        let found = self.take(4)?;
        if found != tag {
            return Err(ModelError::Corrupt {
                offset: at,
                message: format!(
                    "expected block {}, found {:?}",
                    String::from_utf8_lossy(tag),
                    String::from_utf8_lossy(found)
                ),
            });
        }
        let n = self.len(1)?;
        let start = self.pos;
        self.take(n)?;
        Ok(Reader {
            bytes: &self.bytes[..start + n],
            pos: start,
        })
    }

    fn finish(&self) -> Result<(), ModelError> {
        if self.pos != self.bytes.len() {
            return Err(self.corrupt(format!("{} unread bytes", self.bytes.len() - self.pos)));
        }
        Ok(())
    }

    fn standardizer(&mut self) -> Result<StandardizationStats, ModelError> {
        let mut r = self.block(b"STD0")?;
        let d = r.len(16)?;
        let mean = r.f64s(d)?;
        let scale = r.f64s(d)?;
        if let Some(i) = scale.iter().position(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(r.corrupt(format!("standardizer scale[{i}] not positive")));
        }
        r.finish()?;
        Ok(StandardizationStats { mean, scale })
    }

    fn pca(&mut self) -> Result<PcaModel, ModelError> {
        let mut r = self.block(b"PCA0")?;
        let k = r.len(8)?;
        let d = r.len(8)?;
        let mean = r.f64s(d)?;
        let kd = k.checked_mul(d).ok_or_else(|| r.corrupt("PCA size overflow"))?;
        let comps = r.f64s(kd)?;
        let explained = r.f64s(k)?;
        r.finish()?;
        Ok(PcaModel {
            mean,
            components: Matrix::from_vec(k, d, comps),
            explained_variance: explained,
        })
    }

    fn forest(&mut self) -> Result<Forest, ModelError> {
        let mut r = self.block(b"FRST")?;
        let n_classes = r.u32()? as usize;
        let n_features = r.u64()?;
        let max_features = r.u64()?;
        let seed = r.u64()?;
        if n_classes == 0 || n_features == 0 || n_features > u32::MAX as u64 || max_features > n_features {
            return Err(r.corrupt(format!(
                "bad forest header: {n_classes} classes, {n_features} features, {max_features} per split"
            )));
        }
        let n_trees = r.len(8)?;
        if n_trees == 0 {
            return Err(r.corrupt("forest has no trees"));
        }
        let mut trees = Vec::with_capacity(n_trees);
        for _ in 0..n_trees {
            let n_nodes = r.len(1)?;
            if n_nodes == 0 {
                return Err(r.corrupt("tree has no nodes"));
            }
            let mut nodes = Vec::with_capacity(n_nodes);
            for i in 0..n_nodes {
                let at = r.pos;
                match r.u8()? {
                    0 => {
                        let counts = (0..n_classes).map(|_| r.u32()).collect::<Result<Vec<_>, _>>()?;
                        nodes.push(Node::Leaf { counts });
                    }
                    1 => {
                        let feature = r.u32()?;
                        let threshold = r.f64()?;
                        let left = r.u32()?;
                        let right = r.u32()?;
                        // children come after their parent, so the tree is acyclic
                        let ok = |c: u32| (c as usize) > i && (c as usize) < n_nodes;
                        if feature as u64 >= n_features || !ok(left) || !ok(right) || left == right {
                            return Err(ModelError::Corrupt {
                                offset: at,
                                message: format!("invalid split node {i}"),
                            });
                        }
                        nodes.push(Node::Split {
                            feature,
                            threshold,
                            left,
                            right,
                        });
                    }
                    t => {
                        return Err(ModelError::Corrupt {
                            offset: at,
                            message: format!("unknown node tag {t}"),
                        })
                    }
                }
            }
            trees.push(DecisionTree { nodes });
        }
        r.finish()?;
        Ok(Forest {
            trees,
            n_classes,
            n_features: n_features as usize,
            max_features: max_features as usize,
            seed,
        })
    }

    fn space(&mut self, config: FeatureConfig, column_meta: Vec<ColumnMeta>, pca: bool) -> Result<FeatureSpace, ModelError> {
        let at = self.pos;
        let standardizer = self.standardizer()?;
        if standardizer.len() != column_meta.len() {
            return Err(ModelError::Corrupt {
                offset: at,
                message: format!(
                    "standardizer has {} columns, metadata {}",
                    standardizer.len(),
                    column_meta.len()
                ),
            });
        }
        let pca = if pca {
            let at = self.pos;
            let p = self.pca()?;
            if p.d() != standardizer.len() || p.k() == 0 {
                return Err(ModelError::Corrupt {
                    offset: at,
                    message: "PCA dimensions do not match the standardizer".into(),
                });
            }
            Some(p)
        } else {
            None
        };
        Ok(FeatureSpace {
            config,
            column_meta,
            standardizer,
            pca,
        })
    }
}

pub fn decode_model(bytes: &[u8]) -> Result<TrainedModel, ModelError> {
    let mut r = Reader { bytes, pos: 0 };
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(ModelError::Magic);
    }
    r.pos = MAGIC.len();
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(ModelError::Version { found: version });
    }
    let meta_len = r.len(1)?;
    let meta_at = r.pos;
    let meta: Meta = serde_json::from_slice(r.take(meta_len)?).map_err(|e| ModelError::Corrupt {
        offset: meta_at,
        message: format!("metadata: {e}"),
    })?;
    let space = r.space(meta.config.features.canonical(), meta.column_meta, meta.main_pca)?;
    let check_dim = |r: &Reader, f: &Forest, s: &FeatureSpace, n_classes: usize| {
        if f.n_features != s.output_dim() || f.n_classes != n_classes {
            Err(r.corrupt(format!(
                "forest expects {} features / {} classes, space yields {} / {n_classes}",
                f.n_features,
                f.n_classes,
                s.output_dim()
            )))
        } else {
            Ok(())
        }
    };
    let classifier = match meta.kind.as_str() {
        "multiclass" => {
            if meta.level1.is_some() {
                return Err(r.corrupt("multiclass model with level-1 metadata"));
            }
            let f = r.forest()?;
            check_dim(&r, &f, &space, crate::dataset::N_STAGES)?;
            Classifier::Multiclass(f)
        }
        "cascade" => {
            let level1_space = match meta.level1 {
                Some(l) => Some(r.space(l.config, l.column_meta, l.pca)?),
                None => None,
            };
            let level1 = r.forest()?;
            check_dim(&r, &level1, level1_space.as_ref().unwrap_or(&space), 2)?;
            let group1 = r.forest()?;
            check_dim(&r, &group1, &space, 3)?;
            let group2 = r.forest()?;
            check_dim(&r, &group2, &space, 2)?;
            Classifier::Cascade {
                level1_space,
                level1,
                group1,
                group2,
            }
        }
        other => return Err(r.corrupt(format!("unknown model kind {other:?}"))),
    };
    r.finish()?;
    Ok(TrainedModel {
        config: meta.config,
        space,
        classifier,
        n_training_rows: meta.n_training_rows,
    })
}

/// Returns the number of bytes written.
pub fn save_model(m: &TrainedModel, path: &Path) -> Result<usize, ModelError> {
    let bytes = encode_model(m);
    std::fs::write(path, &bytes).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(bytes.len())
}

pub fn load_model(path: &Path) -> Result<TrainedModel, ModelError> {
    let bytes = std::fs::read(path).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_model(&bytes)
}
