use serde::Serialize;

use super::{enumerate_partitions, Partition, RankedEigenvector};

/// A junior element type, recorded by its nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JuniorType {
    pub tail: RankedEigenvector,
    #[serde(skip)]
    pub partition: Partition,
}

impl JuniorType {
    /// The full eigenvector in dimension `n`, padded with eigenvalue 1.
    pub fn eigenvector(&self, n: usize) -> Option<RankedEigenvector> {
        let t = self.tail.exponents();
        if t.len() > n {
            return None;
        }
        let mut e = vec![0u64; n - t.len()];
        e.extend_from_slice(t);
        RankedEigenvector::new(self.tail.order(), &e).ok()
    }
}

/// Junior types acting freely in codimension 2 that fit in dimension `n`.
pub fn classify_junior_types(n: usize) -> Vec<JuniorType> {
    let mut out: Vec<JuniorType> = enumerate_partitions()
        .into_iter()
        .filter(|p| p.free_codim2)
        .map(|p| JuniorType { tail: p.tail(), partition: p })
        .filter(|t| t.tail.dim() <= n)
        .collect();
    out.sort_by(|a, b| {
        (a.tail.order(), a.tail.dim(), a.tail.exponents()).cmp(&(b.tail.order(), b.tail.dim(), b.tail.exponents()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_types() {
        let ts = classify_junior_types(6);
        let shown: Vec<String> = ts.iter().map(|t| t.tail.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "(1,1,1)/3",
                "(1,1,1,1)/4",
                "(1,1,1,3)/6",
                "(1,1,1,1,2)/6",
                "(1,1,1,1,1,1)/6",
                "(1,2,4)/7",
                "(1,1,3,3)/8",
                "(1,1,5,5)/12",
                "(1,2,4,8)/15",
                "(1,3,5,7)/16",
                "(1,3,7,9)/20",
                "(1,5,7,11)/24",
            ]
        );
        assert_eq!(classify_junior_types(4).len(), 10);
        assert_eq!(ts[0].eigenvector(6).unwrap().to_string(), "(0,0,0,1,1,1)/3");
        assert!(ts[4].eigenvector(5).is_none());
    }
}
