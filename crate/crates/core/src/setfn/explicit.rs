use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_cap, Class, Kind, SetFunction};
use crate::error::{Error, Result};
use crate::ext::{ExtInt, Finite, NegInf, PosInf};
use crate::subset::{GroundSet, Subset};

/// Largest ground set an explicit table may cover.
pub const EXPLICIT_MAX_N: usize = 24;

/// A set function stored as a dense table indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitSetFunction {
    pub ground: GroundSet,
    kind: Kind,
    class: Class,
    table: Vec<ExtInt>,
}

/// On-disk JSON form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetFunctionFile {
    pub n: usize,
    pub kind: Kind,
    pub class: Class,
    #[serde(default)]
    pub default: Option<ExtInt>,
    pub entries: Vec<(u64, ExtInt)>,
}

impl ExplicitSetFunction {
    pub fn from_table(n: usize, kind: Kind, class: Class, table: Vec<ExtInt>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if n > EXPLICIT_MAX_N {
            return Err(Error::Capacity { needed: n, cap: EXPLICIT_MAX_N });
        }
        if table.len() != 1usize << n {
            return Err(Error::Invalid(format!("table needs {} entries", 1usize << n)));
        }
        if table[0] != Finite(0) {
            return Err(Error::Invalid("value on the empty set must be 0".into()));
        }
        if !table[table.len() - 1].is_finite() {
            return Err(Error::Invalid("value on the full set must be finite".into()));
        }
        let forbidden = match kind {
            Kind::Supermodular => PosInf,
            Kind::Submodular => NegInf,
        };
        if let Some(i) = table.iter().position(|&v| v == forbidden) {
            return Err(Error::Invalid(format!(
                "{kind:?} function takes {forbidden} on {}",
                Subset(i as u64)
            )));
        }
        Ok(ExplicitSetFunction { ground, kind, class, table })
    }

    /// Tabulates any oracle.
    pub fn tabulate(f: &dyn SetFunction) -> Result<Self> {
        let n = f.n();
        check_cap(n)?;
        let table = Subset::full(n).subsets().map(|x| f.eval(x)).collect::<Result<Vec<_>>>()?;
        Self::from_table(n, f.kind(), f.class(), table)
    }

    pub fn from_file(file: &SetFunctionFile) -> Result<Self> {
        if file.n == 0 || file.n > EXPLICIT_MAX_N {
            return Err(Error::Invalid(format!("n must be in 1..={EXPLICIT_MAX_N}")));
        }
        let size = 1usize << file.n;
        let mut table: Vec<Option<ExtInt>> = vec![file.default; size];
        table[0] = table[0].or(Some(Finite(0)));
        for &(mask, v) in &file.entries {
            if mask as usize >= size {
                return Err(Error::Invalid(format!("mask {mask} out of range")));
            }
            table[mask as usize] = Some(v);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("no value for mask {i}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(file.n, file.kind, file.class, table)
    }

    pub fn to_file(&self) -> SetFunctionFile {
        SetFunctionFile {
            n: self.ground.n,
            kind: self.kind,
            class: self.class,
            default: None,
            entries: self.table.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: SetFunctionFile =
            serde_json::from_str(s).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("table serializes")
    }

    pub fn table(&self) -> &[ExtInt] {
        &self.table
    }
}

impl SetFunction for ExplicitSetFunction {
    fn n(&self) -> usize {
        self.ground.n
    }
    fn kind(&self) -> Kind {
        self.kind
    }
    fn class(&self) -> Class {
        self.class
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        self.table
            .get(x.0 as usize)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("subset {x} outside ground set")))
    }
}

type EvalFn = dyn Fn(Subset) -> ExtInt + Send + Sync;

/// A set function given by a closure.
#[derive(Clone)]
pub struct FnSetFunction {
    n: usize,
    kind: Kind,
    class: Class,
    f: Arc<EvalFn>,
}

impl FnSetFunction {
    pub fn new(
        n: usize,
        kind: Kind,
        class: Class,
        f: impl Fn(Subset) -> ExtInt + Send + Sync + 'static,
    ) -> Self {
        FnSetFunction { n, kind, class, f: Arc::new(f) }
    }
}

impl SetFunction for FnSetFunction {
    fn n(&self) -> usize {
        self.n
    }
    fn kind(&self) -> Kind {
        self.kind
    }
    fn class(&self) -> Class {
        self.class
    }
    fn eval(&self, x: Subset) -> Result<ExtInt> {
        Ok((self.f)(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_with_default() {
        let s = r#"{"n":2,"kind":"supermodular","class":"fully","default":"-inf","entries":[[0,0],[3,5]]}"#;
        let f = ExplicitSetFunction::from_json(s).unwrap();
        assert_eq!(f.eval(Subset(1)).unwrap(), NegInf);
        assert_eq!(f.eval(Subset(3)).unwrap(), Finite(5));
        let back = ExplicitSetFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_tables() {
        let missing = r#"{"n":2,"kind":"supermodular","class":"fully","entries":[[3,1]]}"#;
        assert!(ExplicitSetFunction::from_json(missing).is_err());
        let wrong_inf = r#"{"n":1,"kind":"supermodular","class":"fully","entries":[[1,"+inf"]]}"#;
        assert!(ExplicitSetFunction::from_json(wrong_inf).is_err());
        assert!(matches!(
            ExplicitSetFunction::from_json("{"),
            Err(Error::Parse { .. })
        ));
    }
}
