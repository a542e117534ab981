use std::fmt::{Display, Write as _};

use taxfrontier::{TaxPolicy, WelfarePoint};

pub const COLUMNS: &str = "c,beta1,beta2,y1,alpha,U,sigma_u,V";

/// `%g` with six significant digits, independent of locale.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let fixed = format!("{x:.*}", (5 - exp) as usize);
    trim_zeros(&fixed).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV body preceded by `#` lines naming every parameter in effect.
#[derive(Default)]
pub struct Report {
    header: Vec<String>,
    body: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.header.push(format!("# command = {command}"));
        r
    }

    /// Records `value`, or `default` marked as such when `value` is absent.
    pub fn param<T: Display>(&mut self, key: &str, value: Option<T>, default: T) -> T {
        match value {
            Some(v) => {
                self.header.push(format!("# {key} = {v}"));
                v
            }
            None => {
                self.header.push(format!("# {key} = {default} (default)"));
                default
            }
        }
    }

    /// As [`Report::param`], printing the value with [`num`].
    pub fn float(&mut self, key: &str, value: Option<f64>, default: f64) -> f64 {
        let shown = value.map(num);
        self.param(key, shown, num(default));
        value.unwrap_or(default)
    }

    pub fn note(&mut self, line: impl Display) {
        self.header.push(format!("# {line}"));
    }

    pub fn line(&mut self, line: impl Display) {
        writeln!(self.body, "{line}").expect("string write");
    }

    pub fn row(&mut self, sweep: Option<f64>, c: f64, policy: &TaxPolicy, w: &WelfarePoint) {
        self.cells(sweep, c, policy.beta1, policy.beta2, Some(policy.y1), policy.alpha, w);
    }

    /// Row with `y1` left blank, used for the logarithmic model.
    pub fn log_row(&mut self, sweep: Option<f64>, c: f64, beta: f64, alpha: f64, w: &WelfarePoint) {
        self.cells(sweep, c, beta, beta, None, alpha, w);
    }

    #[allow(clippy::too_many_arguments)]
    fn cells(
        &mut self,
        sweep: Option<f64>,
        c: f64,
        beta1: f64,
        beta2: f64,
        y1: Option<f64>,
        alpha: f64,
        w: &WelfarePoint,
    ) {
        let mut cols: Vec<String> = sweep.map(num).into_iter().collect();
        cols.extend([num(c), num(beta1), num(beta2), y1.map(num).unwrap_or_default()]);
        cols.extend([alpha, w.mean_utility, w.sigma_u, w.v].map(num));
        self.line(cols.join(","));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        out.push_str(&self.body);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn matches_printf_g() {
        for (x, s) in [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (0.375, "0.375"),
            (15.29827, "15.2983"),
            (16.666666666, "16.6667"),
            (123456.7, "123457"),
            (999999.7, "1e+06"),
            (1234567.0, "1.23457e+06"),
            (7.45273e10, "7.45273e+10"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5, "-2.5"),
            (0.1 + 0.2, "0.3"),
        ] {
            assert_eq!(num(x), s, "{x}");
        }
    }
}
