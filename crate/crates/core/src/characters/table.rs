use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::{dimension, ratio_from_integer, MnOracle};
use crate::error::{Error, Result};
use crate::partitions::{classes, partition_list, CycleType, Partition};

pub const DEFAULT_TABLE_CAP: usize = 14;

/// The full integer character table of `S_n`.
///
/// Rows are irreducibles and columns are classes, both in reverse-lexicographic
/// order, so the last column is the identity class and the first row is the
/// trivial representation.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    n: usize,
    irreps: Vec<Partition>,
    classes: Vec<CycleType>,
    values: Vec<Vec<BigInt>>,
    dims: Vec<BigUint>,
}

impl CharacterTable {
    /// Builds the table with the default cap of `n <= 14`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let irreps = partition_list(n)?;
        let classes = classes(n)?;
        let values = irreps
            .par_iter()
            .map(|lambda| {
                let mut oracle = MnOracle::new();
                classes.iter().map(|rho| oracle.character(lambda, rho)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let dims = irreps.iter().map(dimension).collect();
        Ok(Self { n, irreps, classes, values, dims })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn irreps(&self) -> &[Partition] {
        &self.irreps
    }

    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    pub fn value(&self, irrep: usize, class: usize) -> &BigInt {
        &self.values[irrep][class]
    }

    pub fn row(&self, irrep: usize) -> &[BigInt] {
        &self.values[irrep]
    }

    pub fn irrep_index(&self, lambda: &Partition) -> Option<usize> {
        self.irreps.iter().position(|p| p == lambda)
    }

    pub fn class_index(&self, rho: &CycleType) -> Option<usize> {
        self.classes.iter().position(|c| c == rho)
    }

    /// `χ^λ(C) / f^λ` for every irreducible, in row order.
    pub fn ratios_at(&self, class: &CycleType) -> Result<Vec<BigRational>> {
        let c = self.class_index(class).ok_or(Error::SizeMismatch { expected: self.n, got: class.n() })?;
        Ok(self.values.iter().zip(&self.dims).map(|(row, dim)| ratio_from_integer(&row[c], dim)).collect())
    }

    /// CSV with a `lambda` label column followed by one column per class.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Parse(format!("csv write failed: {e}"));
        let mut header = vec!["lambda".to_string()];
        header.extend(self.classes.iter().map(|c| c.to_string()));
        w.write_record(&header).map_err(io)?;
        for (lambda, row) in self.irreps.iter().zip(&self.values) {
            let mut rec = vec![lambda.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv flush failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row<'a> {
            lambda: &'a Partition,
            dimension: String,
            values: Vec<String>,
        }
        #[derive(Serialize)]
        struct Table<'a> {
            n: usize,
            classes: &'a [CycleType],
            rows: Vec<Row<'a>>,
        }
        let rows = self
            .irreps
            .iter()
            .zip(&self.values)
            .zip(&self.dims)
            .map(|((lambda, row), dim)| Row {
                lambda,
                dimension: dim.to_string(),
                values: row.iter().map(|v| v.to_string()).collect(),
            })
            .collect();
        serde_json::to_value(Table { n: self.n, classes: &self.classes, rows }).expect("table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn s3_table() {
        let t = CharacterTable::new(3).unwrap();
        let dims: Vec<u32> = t.dims().iter().map(|d| d.try_into().unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 1]);
        // classes: (3), (2,1), (1,1,1)
        let expect = [[1, 1, 1], [-1, 0, 2], [1, -1, 1]];
        for (i, row) in expect.iter().enumerate() {
            let got: Vec<i64> = t.row(i).iter().map(|v| v.try_into().unwrap()).collect();
            assert_eq!(got, row.to_vec());
        }
    }

    #[test]
    fn s2_table_and_s4_dims() {
        let t = CharacterTable::new(2).unwrap();
        assert_eq!(t.row(0), &[BigInt::one(), BigInt::one()]);
        assert_eq!(t.row(1), &[BigInt::from(-1), BigInt::one()]);

        let t = CharacterTable::new(4).unwrap();
        let dims: Vec<u32> = t.dims().iter().map(|d| d.try_into().unwrap()).collect();
        assert_eq!(dims, vec![1, 3, 2, 3, 1]);
        let total: BigUint = t.dims().iter().map(|d| d * d).sum();
        assert_eq!(total, BigUint::from(24u32));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(CharacterTable::new(15).unwrap_err(), Error::CapExceeded { n: 15, cap: 14 });
        assert!(CharacterTable::with_cap(15, 15).is_ok());
    }

    #[test]
    fn csv_and_json_layout() {
        let t = CharacterTable::new(3).unwrap();
        let csv = t.to_csv_string().unwrap();
        assert_eq!(csv, "lambda,3,\"2,1\",\"1,1,1\"\n3,1,1,1\n\"2,1\",-1,0,2\n\"1,1,1\",1,-1,1\n");
        let json = t.to_json();
        assert_eq!(json["classes"][1], "2,1");
        assert_eq!(json["rows"][1]["dimension"], "2");
        assert_eq!(json["rows"][1]["values"][0], "-1");
    }
}
