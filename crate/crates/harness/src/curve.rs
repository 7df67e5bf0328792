/// One named column of a [`Curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
    /// Runs dropped from the average because the filter state went
    /// non-finite.
    pub diverged: usize,
}

impl Series {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
            diverged: 0,
        }
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// A table of metrics over an integer axis (symbol index or rank).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub x_label: String,
    pub x: Vec<u64>,
    pub series: Vec<Series>,
    pub runs: usize,
}

impl Curve {
    pub fn new(x_label: impl Into<String>, x: Vec<u64>) -> Self {
        Self {
            x_label: x_label.into(),
            x,
            series: Vec::new(),
            runs: 0,
        }
    }

    /// Appends a column; panics if its length differs from the axis.
    pub fn push(&mut self, series: Series) {
        assert_eq!(series.values.len(), self.x.len(), "series `{}` length", series.name);
        self.series.push(series);
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

pub fn to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

pub fn from_db(v: f64) -> f64 {
    10f64.powf(v / 10.0)
}
