//! Daily price series, the weekly seasonal filter and log-returns.

use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use tempered_core::{Provenance, Sample};

use crate::error::{PipelineError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    pub dates: Vec<NaiveDate>,
    pub prices: Vec<f64>,
    /// Days preceded by a removed non-positive price; the return into such a
    /// day spans the gap and is dropped.
    pub flagged: Vec<bool>,
}

#[derive(Deserialize)]
struct Row {
    date: String,
    price: f64,
}

impl PriceSeries {
    pub const MIN_LEN: usize = 30;

    pub fn new(dates: Vec<NaiveDate>, prices: Vec<f64>) -> Result<Self> {
        if dates.len() != prices.len() {
            return Err(PipelineError::Invalid(format!("{} dates but {} prices", dates.len(), prices.len())));
        }
        if dates.len() < Self::MIN_LEN {
            return Err(PipelineError::Invalid(format!("series has {} observations, at least {} needed", dates.len(), Self::MIN_LEN)));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(PipelineError::Invalid(format!("dates are not strictly increasing at {}", w[1])));
        }
        if let Some(p) = prices.iter().find(|p| !p.is_finite()) {
            return Err(PipelineError::Invalid(format!("price {p} is not finite")));
        }
        let flagged = vec![false; prices.len()];
        Ok(Self { dates, prices, flagged })
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Reads `date,price` CSV with ISO-8601 dates.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut dates = Vec::new();
        let mut prices = Vec::new();
        for (i, row) in rdr.deserialize::<Row>().enumerate() {
            let row = row?;
            let date = NaiveDate::parse_from_str(&row.date, "%Y-%m-%d")
                .map_err(|e| PipelineError::Parse { line: i + 2, message: format!("date '{}': {e}", row.date) })?;
            dates.push(date);
            prices.push(row.price);
        }
        Self::new(dates, prices)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["date", "price"])?;
        for (d, p) in self.dates.iter().zip(&self.prices) {
            w.write_record([d.format("%Y-%m-%d").to_string(), format!("{p}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn nonpositive(&self) -> usize {
        self.prices.iter().filter(|&&p| p <= 0.0).count()
    }

    /// Removes non-positive prices and flags the day after each removed run.
    pub fn drop_nonpositive(&self) -> Self {
        let mut out = Self { dates: Vec::new(), prices: Vec::new(), flagged: Vec::new() };
        let mut gap = false;
        for i in 0..self.len() {
            if self.prices[i] > 0.0 {
                out.dates.push(self.dates[i]);
                out.prices.push(self.prices[i]);
                out.flagged.push(self.flagged[i] || gap);
                gap = false;
            } else {
                gap = true;
            }
        }
        out
    }
}

const WEEK: usize = 7;

/// Ratio-to-moving-average removal of the weekly profile: prices are divided
/// by the centred 7-day moving average, the ratios averaged per weekday, and
/// each price divided by the (mean-one) factor of its weekday.
pub fn deseasonalize_weekly(series: &PriceSeries) -> Result<PriceSeries> {
    let s = series.drop_nonpositive();
    let n = s.len();
    if n < 2 * WEEK {
        return Err(PipelineError::Invalid(format!("weekly filter needs at least two weeks of data, got {n} days")));
    }
    let half = WEEK / 2;
    let mut sum = [0.0; WEEK];
    let mut count = [0usize; WEEK];
    let mut window: f64 = s.prices[..WEEK].iter().sum();
    for t in half..n - half {
        if t > half {
            window += s.prices[t + half] - s.prices[t - half - 1];
        }
        let day = s.dates[t].weekday().num_days_from_monday() as usize;
        sum[day] += s.prices[t] / (window / WEEK as f64);
        count[day] += 1;
    }
    let present: Vec<usize> = (0..WEEK).filter(|&d| count[d] > 0).collect();
    let mut factor = [1.0; WEEK];
    for &d in &present {
        factor[d] = sum[d] / count[d] as f64;
    }
    let mean = present.iter().map(|&d| factor[d]).sum::<f64>() / present.len() as f64;
    for f in factor.iter_mut() {
        *f /= mean;
    }
    let prices = s.prices.iter().zip(&s.dates).map(|(p, d)| p / factor[d.weekday().num_days_from_monday() as usize]).collect();
    Ok(PriceSeries { dates: s.dates, prices, flagged: s.flagged })
}

/// `r_t = ln(p_t / p_{t−1})`, skipping returns that bridge a removed day.
pub fn log_returns(series: &PriceSeries) -> Result<Sample> {
    if let Some(p) = series.prices.iter().find(|&&p| !(p > 0.0)) {
        return Err(PipelineError::Invalid(format!("non-positive price {p}; remove such days first")));
    }
    let r = (1..series.len())
        .filter(|&t| !series.flagged[t])
        .map(|t| (series.prices[t] / series.prices[t - 1]).ln())
        .collect();
    Ok(Sample::new(r, Provenance::Memory))
}
