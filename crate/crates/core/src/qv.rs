//! From prices to quadratic-variation curves.

use crate::error::{Error, Result};
use crate::panel::{LogTotalQv, PricePanel, QvPanel, ReturnPanel, StdQvPanel};

/// Cumulative intraday returns `log P_i(t_k) - log P_i(t_0)`.
pub fn cidr_curves(prices: &PricePanel) -> Result<ReturnPanel> {
    let cols = prices.grid_size() + 1;
    let mut data = Vec::with_capacity(prices.n_days() * cols);
    for (i, row) in prices.rows().enumerate() {
        if let Some(column) = row.iter().position(|&p| !(p > 0.0)) {
            return Err(Error::NonPositivePrice { row: i, column, value: row[column] });
        }
        let base = row[0].ln();
        data.push(0.0);
        data.extend(row[1..].iter().map(|p| p.ln() - base));
    }
    Ok(ReturnPanel::from_parts_unchecked(prices.days().to_vec().into(), cols, data))
}

/// Realized quadratic variation: running sums of squared return increments.
pub fn realized_qv(returns: &ReturnPanel) -> Result<QvPanel> {
    let k = returns.grid_size();
    if k < 2 {
        return Err(Error::GridTooSmall { k, min: 2 });
    }
    let mut data = Vec::with_capacity(returns.n_days() * k);
    for row in returns.rows() {
        let mut acc = 0.0;
        for pair in row.windows(2) {
            let d = pair[1] - pair[0];
            acc += d * d;
            data.push(acc);
        }
    }
    Ok(QvPanel::from_parts(returns.shared_days(), k, data))
}

fn check_total(qv: &QvPanel) -> Result<()> {
    for (i, row) in qv.rows().enumerate() {
        let total = row[row.len() - 1];
        if !(total > 0.0) {
            return Err(Error::FlatDay { row: i, day: qv.days()[i].to_string() });
        }
    }
    Ok(())
}

/// `Q̂_i(t) / Q̂_i(1)`. Fails on a day with zero total variation.
pub fn standardized_qv(qv: &QvPanel) -> Result<StdQvPanel> {
    check_total(qv)?;
    let k = qv.grid_size();
    let mut data = Vec::with_capacity(qv.n_days() * k);
    for row in qv.rows() {
        let total = row[k - 1];
        data.extend(row.iter().map(|q| q / total));
    }
    Ok(StdQvPanel::from_parts(qv.shared_days(), k, data))
}

/// `log Q̂_i(1)`. Fails on a day with zero total variation.
pub fn log_total_qv(qv: &QvPanel) -> Result<LogTotalQv> {
    check_total(qv)?;
    let values = qv.rows().map(|row| row[row.len() - 1].ln()).collect();
    Ok(LogTotalQv::from_parts(qv.shared_days(), values))
}
