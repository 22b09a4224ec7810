use super::ConditionsError;

/// Largest `T` accepted; `2^T` and `T!` stay far inside `f64` range.
pub const LUCA_MAX_T: u32 = 20;

/// `n < exp(X)` with `X = ((K + ln Lc) * T!)^(2^T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LucaBound {
    /// `X` itself; `inf` once it leaves `f64` range.
    pub log_bound: f64,
    /// `ln X = 2^T * ln((K + ln Lc) * T!)`, always finite.
    pub log_log_bound: f64,
}

/// Evaluates the size bound for `omega(n) = T` and `sigma(n) | Lc * rad(n)^K`.
/// Display only: the result is never used to decide anything.
pub fn luca_log_bound(k: u64, lc: u64, t: u32) -> Result<LucaBound, ConditionsError> {
    if k == 0 || lc == 0 || t == 0 {
        return Err(ConditionsError::BoundParameter("K, Lc and T must be positive".into()));
    }
    if t > LUCA_MAX_T {
        return Err(ConditionsError::BoundParameter(format!("T = {t} exceeds {LUCA_MAX_T}")));
    }
    let factorial: f64 = (1..=t).map(f64::from).product();
    let base = (k as f64 + (lc as f64).ln()) * factorial;
    let power = 1i32 << t;
    Ok(LucaBound {
        log_bound: base.powi(power),
        log_log_bound: f64::from(power as u32) * base.ln(),
    })
}
