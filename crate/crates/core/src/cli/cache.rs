//! On-disk cache of computed subspaces, keyed by a content hash of the
//! algebra presentation and an object id such as `derived/2`.

use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::Algebra;
use crate::linalg::GradedSubspace;
use crate::scalar::Field;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    version: u32,
    spec: String,
    object: String,
    layers: Vec<Layer>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Layer {
    degree: usize,
    rows: Vec<Vec<(u32, String)>>,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(Cache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key<F: Field>(alg: &Algebra<F>, object: &str) -> String {
        let text = format!(
            "nilpow-cache/v{FORMAT_VERSION}|{}|{object}",
            alg.spec().canonical_key()
        );
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn path<F: Field>(&self, alg: &Algebra<F>, object: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(alg, object)))
    }

    // single-process access; the lock is released when the file is dropped
    fn lock(&self) -> io::Result<File> {
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))?;
        f.lock()?;
        Ok(f)
    }

    /// A stored subspace, or `None` on a miss. Unreadable or mismatched
    /// entries count as misses.
    pub fn get<F: Field>(&self, alg: &Algebra<F>, object: &str) -> Option<GradedSubspace<F>> {
        let path = self.path(alg, object);
        let _guard = self.lock().ok()?;
        let text = fs::read_to_string(&path).ok()?;
        match decode(alg, object, &text) {
            Some(s) => Some(s),
            None => {
                log::warn!("ignoring unusable cache entry {}", path.display());
                None
            }
        }
    }

    pub fn put<F: Field>(
        &self,
        alg: &Algebra<F>,
        object: &str,
        subspace: &GradedSubspace<F>,
    ) -> io::Result<()> {
        let field = alg.field();
        let layers = (1..=subspace.max_degree())
            .filter(|&d| subspace.dim_at(d) > 0)
            .map(|d| Layer {
                degree: d,
                rows: subspace
                    .layer(d)
                    .canonical_rows()
                    .into_iter()
                    .map(|r| r.iter().map(|(o, c)| (*o, field.render(c))).collect())
                    .collect(),
            })
            .collect();
        let entry = Entry {
            version: FORMAT_VERSION,
            spec: alg.spec().canonical_key(),
            object: object.to_string(),
            layers,
        };
        let text = serde_json::to_string(&entry).map_err(io::Error::other)?;
        let _guard = self.lock()?;
        let path = self.path(alg, object);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(tmp, path)
    }

    #[cfg(test)]
    fn raw_path<F: Field>(&self, alg: &Algebra<F>, object: &str) -> PathBuf {
        self.path(alg, object)
    }
}

fn decode<F: Field>(alg: &Algebra<F>, object: &str, text: &str) -> Option<GradedSubspace<F>> {
    let entry: Entry = serde_json::from_str(text).ok()?;
    if entry.version != FORMAT_VERSION
        || entry.spec != alg.spec().canonical_key()
        || entry.object != object
    {
        return None;
    }
    let field = alg.field();
    let mut s = alg.empty_subspace();
    for layer in entry.layers {
        if layer.degree == 0 || layer.degree > alg.max_degree() {
            return None;
        }
        let dim = alg.dim(layer.degree);
        let expected = layer.rows.len();
        for row in layer.rows {
            let mut parsed = Vec::with_capacity(row.len());
            for (o, c) in row {
                if o as u64 >= dim {
                    return None;
                }
                parsed.push((o, field.parse(&c).ok()?));
            }
            if parsed.windows(2).any(|w| w[0].0 >= w[1].0) {
                return None;
            }
            s.insert_homogeneous(layer.degree, &parsed);
        }
        if s.dim_at(layer.degree) != expected {
            return None;
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::derived_power;
    use crate::scalar::{FieldSpec, PrimeField, Rationals};
    use crate::words::AlgebraSpec;

    fn alg(d: usize) -> Algebra<PrimeField> {
        let spec = AlgebraSpec::new(vec![2, 2], FieldSpec::Prime(32003), d).unwrap();
        Algebra::new(spec, PrimeField::new(32003).unwrap()).unwrap()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let a = alg(6);
        assert!(cache.get(&a, "derived/1").is_none());
        let tower = derived_power(&a, 1).unwrap();
        cache.put(&a, "derived/1", tower.level(1)).unwrap();
        let back = cache.get(&a, "derived/1").unwrap();
        for d in 1..=6 {
            assert_eq!(
                back.layer(d).canonical_rows(),
                tower.level(1).layer(d).canonical_rows()
            );
        }
        // a different truncation is a different key
        assert!(cache.get(&alg(7), "derived/1").is_none());
    }

    #[test]
    fn rationals_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let spec = AlgebraSpec::new(vec![3, 3], FieldSpec::Rationals, 5).unwrap();
        let a = Algebra::new(spec, Rationals).unwrap();
        let tower = derived_power(&a, 2).unwrap();
        cache.put(&a, "derived/2", tower.level(2)).unwrap();
        let back = cache.get(&a, "derived/2").unwrap();
        assert_eq!(back.dim_vector(), tower.level(2).dim_vector());
        assert!(back.is_subspace_of(tower.level(2)).unwrap());
    }

    #[test]
    fn version_mismatch_and_corruption_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let a = alg(6);
        let tower = derived_power(&a, 1).unwrap();
        cache.put(&a, "derived/1", tower.level(1)).unwrap();
        let path = cache.raw_path(&a, "derived/1");
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("\"version\":1", "\"version\":0", 1)).unwrap();
        assert!(cache.get(&a, "derived/1").is_none());
        fs::write(&path, "{not json").unwrap();
        assert!(cache.get(&a, "derived/1").is_none());
    }
}
