//! Nonlinearity specs: `power:p=4`, `power_plus_const:p=4,eps=0.1`,
//! `odd_poly:c1=-1,c3=1`.

use std::collections::BTreeMap;

use graphpde_core::Nonlinearity;

pub fn parse(spec: &str) -> Result<Nonlinearity, String> {
    let (family, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params: BTreeMap<&str, f64> = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("parameter '{item}' is not of the form key=value"))?;
        let value: f64 = value
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| format!("parameter '{key}' has non-numeric value '{value}'"))?;
        if params.insert(key.trim(), value).is_some() {
            return Err(format!("parameter '{key}' given twice"));
        }
    }
    let take = |params: &mut BTreeMap<&str, f64>, key: &str| {
        params
            .remove(key)
            .ok_or_else(|| format!("{family} needs parameter '{key}'"))
    };
    let nl = match family {
        "power" => {
            let p = take(&mut params, "p")?;
            Nonlinearity::power(p)
        }
        "power_plus_const" => {
            let p = take(&mut params, "p")?;
            let eps = take(&mut params, "eps")?;
            Nonlinearity::power_plus_const(p, eps)
        }
        "odd_poly" => {
            let mut coefficients = Vec::new();
            for (key, value) in std::mem::take(&mut params) {
                let k = key
                    .strip_prefix('c')
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| format!("odd_poly parameter '{key}' should look like c3"))?;
                coefficients.push((k, value));
            }
            Nonlinearity::odd_poly(&coefficients)
        }
        other => {
            return Err(format!(
                "unknown nonlinearity family '{other}' (power, power_plus_const, odd_poly)"
            ))
        }
    }
    .map_err(|e| e.to_string())?;
    if let Some(key) = params.keys().next() {
        return Err(format!("unknown parameter '{key}' for {family}"));
    }
    Ok(nl)
}
