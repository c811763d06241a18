//! Panels of intraday curves, one row per trading day.
//!
//! All matrices are stored row-major. Derived panels ([`QvPanel`],
//! [`StdQvPanel`]) carry `K` columns for the grid points `k/K`, `k = 1..=K`;
//! the value at `t = 0` is identically zero and is not stored.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trading-day identifier: an ISO date or an integer index.
///
/// Two identifiers that both parse as integers compare numerically, anything
/// else compares lexicographically (which orders ISO dates correctly).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DayId(String);

impl DayId {
    pub fn new(label: impl Into<String>) -> Self {
        DayId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `1..=n` as identifiers, for panels without calendar dates.
    pub fn sequence(n: usize) -> Vec<DayId> {
        (1..=n).map(|i| DayId(i.to_string())).collect()
    }
}

impl Ord for DayId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0.parse::<i64>(), other.0.parse::<i64>()) {
            (Ok(a), Ok(b)) => a.cmp(&b),
            _ => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for DayId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DayId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for DayId {
    fn from(s: &str) -> Self {
        DayId(s.to_owned())
    }
}

fn check_days(days: &[DayId], rows: usize) -> Result<()> {
    if days.len() != rows {
        return Err(Error::LabelMismatch { labels: days.len(), rows });
    }
    for (i, pair) in days.windows(2).enumerate() {
        if pair[0] >= pair[1] {
            return Err(Error::UnsortedDays {
                row: i + 1,
                previous: pair[0].to_string(),
                current: pair[1].to_string(),
            });
        }
    }
    Ok(())
}

/// Row-major `rows x cols` storage shared by the panel types.
#[derive(Debug, Clone, PartialEq)]
struct Rows {
    days: Arc<[DayId]>,
    cols: usize,
    data: Vec<f64>,
}

impl Rows {
    fn n(&self) -> usize {
        self.days.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn slice(&self, range: Range<usize>) -> Rows {
        Rows {
            days: self.days[range.clone()].into(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }
}

/// Intraday prices: `N` days by `K + 1` strictly positive observations.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePanel(Rows);

impl PricePanel {
    pub fn new(days: Vec<DayId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedRow { row: i, expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(days, cols, data)
    }

    /// Builds a panel from a flat row-major buffer with `cols = K + 1`.
    pub fn from_row_major(days: Vec<DayId>, cols: usize, data: Vec<f64>) -> Result<Self> {
        if cols < 2 {
            return Err(Error::GridTooSmall { k: cols.saturating_sub(1), min: 1 });
        }
        if days.is_empty() {
            return Err(Error::TooFewDays { n: 0, min: 1 });
        }
        if data.len() != days.len() * cols {
            return Err(Error::LabelMismatch { labels: days.len(), rows: data.len() / cols });
        }
        for (idx, &p) in data.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { row: idx / cols, column: idx % cols });
            }
            if p <= 0.0 {
                return Err(Error::NonPositivePrice { row: idx / cols, column: idx % cols, value: p });
            }
        }
        check_days(&days, days.len())?;
        Ok(PricePanel(Rows { days: days.into(), cols, data }))
    }

    pub fn n_days(&self) -> usize {
        self.0.n()
    }

    /// Number of intraday intervals `K`; rows hold `K + 1` prices.
    pub fn grid_size(&self) -> usize {
        self.0.cols - 1
    }

    pub fn days(&self) -> &[DayId] {
        &self.0.days
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.0.data.chunks_exact(self.0.cols)
    }
}

/// Cumulative intraday returns `R_i(k/K)`, `k = 0..=K`, first column zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnPanel(Rows);

impl ReturnPanel {
    /// Wraps simulated or precomputed returns; `cols = K + 1`.
    pub fn from_row_major(days: Vec<DayId>, cols: usize, data: Vec<f64>) -> Result<Self> {
        if cols < 2 {
            return Err(Error::GridTooSmall { k: cols.saturating_sub(1), min: 1 });
        }
        if data.len() != days.len() * cols {
            return Err(Error::LabelMismatch { labels: days.len(), rows: data.len() / cols });
        }
        for (idx, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: idx / cols, column: idx % cols });
            }
        }
        for (i, row) in data.chunks_exact(cols).enumerate() {
            if row[0] != 0.0 {
                return Err(Error::NonzeroOrigin { row: i, value: row[0] });
            }
        }
        check_days(&days, days.len())?;
        Ok(ReturnPanel(Rows { days: days.into(), cols, data }))
    }

    pub(crate) fn from_parts_unchecked(days: Arc<[DayId]>, cols: usize, data: Vec<f64>) -> Self {
        ReturnPanel(Rows { days, cols, data })
    }

    pub fn n_days(&self) -> usize {
        self.0.n()
    }

    pub fn grid_size(&self) -> usize {
        self.0.cols - 1
    }

    pub fn days(&self) -> &[DayId] {
        &self.0.days
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.0.data.chunks_exact(self.0.cols)
    }

    pub fn slice(&self, range: Range<usize>) -> Self {
        ReturnPanel(self.0.slice(range))
    }

    pub(crate) fn shared_days(&self) -> Arc<[DayId]> {
        self.0.days.clone()
    }
}

macro_rules! curve_panel {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(Rows);

        impl $name {
            pub(crate) fn from_parts(days: Arc<[DayId]>, cols: usize, data: Vec<f64>) -> Self {
                debug_assert_eq!(data.len(), days.len() * cols);
                $name(Rows { days, cols, data })
            }

            pub fn n_days(&self) -> usize {
                self.0.n()
            }

            /// Number of grid columns `K`.
            pub fn grid_size(&self) -> usize {
                self.0.cols
            }

            pub fn days(&self) -> &[DayId] {
                &self.0.days
            }

            pub fn row(&self, i: usize) -> &[f64] {
                self.0.row(i)
            }

            pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
                self.0.data.chunks_exact(self.0.cols)
            }

            /// Row-major values.
            pub fn as_slice(&self) -> &[f64] {
                &self.0.data
            }

            pub fn slice(&self, range: Range<usize>) -> Self {
                $name(self.0.slice(range))
            }

            #[allow(dead_code)]
            pub(crate) fn shared_days(&self) -> Arc<[DayId]> {
                self.0.days.clone()
            }
        }
    };
}

curve_panel!(
    /// Realized quadratic variation `Q̂_i(k/K)`; rows are nondecreasing.
    QvPanel
);

curve_panel!(
    /// Standardized quadratic variation `Q̂_i(k/K) / Q̂_i(1)`; each row is a
    /// discrete cdf ending at 1.
    StdQvPanel
);

impl StdQvPanel {
    /// Builds a panel from arbitrary curves. Used for testing statistics on
    /// hand-made inputs; no cdf constraints are enforced.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if cols == 0 {
            return Err(Error::GridTooSmall { k: 0, min: 1 });
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedRow { row: i, expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self::from_parts(DayId::sequence(rows.len()).into(), cols, data))
    }
}

/// `log Q̂_i(1)` for each day.
#[derive(Debug, Clone, PartialEq)]
pub struct LogTotalQv {
    days: Arc<[DayId]>,
    values: Vec<f64>,
}

impl LogTotalQv {
    pub(crate) fn from_parts(days: Arc<[DayId]>, values: Vec<f64>) -> Self {
        LogTotalQv { days, values }
    }

    /// Wraps a plain series, labelling days `1..=N`.
    pub fn from_values(values: Vec<f64>) -> Self {
        LogTotalQv { days: DayId::sequence(values.len()).into(), values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_days(&self) -> usize {
        self.values.len()
    }

    pub fn days(&self) -> &[DayId] {
        &self.days
    }

    pub fn slice(&self, range: Range<usize>) -> Self {
        LogTotalQv { days: self.days[range.clone()].into(), values: self.values[range].to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn day_ordering_numeric_and_iso() {
        assert!(DayId::from("9") < DayId::from("10"));
        assert!(DayId::from("2013-07-01") < DayId::from("2013-07-08"));
        assert!(DayId::from("2013-12-31") < DayId::from("2014-01-02"));
    }

    #[test]
    fn price_panel_validation() {
        let days = DayId::sequence(2);
        let ok = PricePanel::new(days.clone(), vec![vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(ok.n_days(), 2);
        assert_eq!(ok.grid_size(), 2);

        let err = PricePanel::new(days.clone(), vec![vec![1.0, 2.0, 3.0], vec![1.0, 0.0, 1.0]]).unwrap_err();
        assert_eq!(err, Error::NonPositivePrice { row: 1, column: 1, value: 0.0 });

        let err = PricePanel::new(days.clone(), vec![vec![1.0, 2.0, 3.0], vec![1.0, 1.0]]).unwrap_err();
        assert_eq!(err, Error::RaggedRow { row: 1, expected: 3, found: 2 });

        let rev = vec![DayId::from("2"), DayId::from("1")];
        let err = PricePanel::new(rev, vec![vec![1.0, 2.0], vec![1.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::UnsortedDays { row: 1, .. }));

        let dup = vec![DayId::from("2020-01-02"), DayId::from("2020-01-02")];
        assert!(PricePanel::new(dup, vec![vec![1.0, 2.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn return_panel_requires_zero_origin() {
        let err = ReturnPanel::from_row_major(DayId::sequence(1), 3, vec![0.1, 0.2, 0.3]).unwrap_err();
        assert!(matches!(err, Error::NonzeroOrigin { row: 0, .. }));
    }
}
