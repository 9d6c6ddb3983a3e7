use alloc::vec::Vec;

use crate::kernels::center_columns;
use crate::pca::{principal_components, project};
use crate::{EmbeddingStore, Error, Result};

/// A row's coordinates on the top two principal components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedPoint {
    pub x: f64,
    pub y: f64,
    /// Corpus frequency from the metadata, 0 when absent.
    pub frequency: u64,
}

/// Projects the centered store onto its top two principal components. When
/// the cloud has rank one, every `y` is 0.
pub fn project_2d(store: &EmbeddingStore) -> Result<Vec<ProjectedPoint>> {
    if store.n_rows() < 2 {
        return Err(Error::Cardinality(alloc::format!("projection needs 2 rows, got {}", store.n_rows())));
    }
    let (centered, _) = center_columns(&store.to_matrix())?;
    let basis = principal_components(&centered, 2)?;
    let coords = project(&centered, &basis)?;
    let freq = |i: usize| store.meta().and_then(|m| m[i].frequency).unwrap_or(0);
    Ok((0..store.n_rows())
        .map(|i| ProjectedPoint {
            x: if !basis.is_empty() { coords[(i, 0)] } else { 0.0 },
            y: if basis.len() > 1 { coords[(i, 1)] } else { 0.0 },
            frequency: freq(i),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn collinear_points_have_zero_y() {
        let data = vec![0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 2.0, 4.0, 6.0, -1.0, -2.0, -3.0];
        let s = EmbeddingStore::new(4, 3, data, None).unwrap();
        let pts = project_2d(&s).unwrap();
        assert!(pts.iter().all(|p| p.y.abs() < 1e-8 && p.frequency == 0));
        // x recovers the signed distance along the line
        let span = pts[2].x - pts[3].x;
        assert!((span.abs() - 3.0 * libm::sqrt(14.0)).abs() < 1e-6);
    }

    #[test]
    fn needs_two_dims_and_rows() {
        let s = EmbeddingStore::new(1, 3, vec![1.0, 2.0, 3.0], None).unwrap();
        assert!(project_2d(&s).is_err());
        let s = EmbeddingStore::new(3, 1, vec![1.0, 2.0, 3.0], None).unwrap();
        assert!(matches!(project_2d(&s), Err(Error::Rank { .. })));
    }
}
