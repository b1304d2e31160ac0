//! Tri-diagonal operator families `L + zB`: diagonal `q_k = k^2`, couplings
//! `b_k`, `c_k` growing like `k^alpha`, and their finite truncations.

use crate::error::FamilyError;
use crate::mp::{MpComplex, MpCtx};
use nalgebra::Complex;
use std::fmt;

pub type C64 = Complex<f64>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyKind {
    /// `b_k = c_k = k^alpha`; the Mathieu matrices at alpha = 0.
    Power,
    /// `b_k = c_k = (2 + (-1)^k) k^alpha`.
    Alternating,
    /// `b_k = c_k = [1 + (-1)^(k-1)] k^alpha`: couplings `2 k^alpha` on odd k,
    /// zero on even k, so the matrix splits into 2x2 blocks.
    Block2,
    /// Couplings from an explicit finite table with an extension rule.
    Custom,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Power => "power",
            FamilyKind::Alternating => "alternating",
            FamilyKind::Block2 => "block2",
            FamilyKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyKind> {
        match s.trim() {
            "power" => Some(FamilyKind::Power),
            "alternating" => Some(FamilyKind::Alternating),
            "block2" => Some(FamilyKind::Block2),
            "custom" => Some(FamilyKind::Custom),
            _ => None,
        }
    }
}

/// How a custom table extends past its last entry. Silent extrapolation is
/// not an option; the growth bound must stay checkable.
#[derive(Clone, PartialEq, Debug)]
pub enum ExtensionRule {
    /// Out-of-range lookups are an error.
    None,
    /// Zero couplings beyond the table.
    Zero,
    /// Couplings from formulas in `k` and `alpha`; `c` defaults to `b`.
    Formula { b: String, c: Option<String> },
}

#[derive(Clone, PartialEq, Debug)]
pub struct CustomTable {
    pub pairs: Vec<(C64, C64)>,
    pub extension: ExtensionRule,
}

#[derive(Clone, PartialEq, Debug)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub alpha: f64,
    /// Growth bound: `|b_k|, |c_k| <= M k^alpha`.
    pub m_bound: f64,
    pub symmetric: bool,
    pub custom: Option<CustomTable>,
}

impl FamilySpec {
    fn validated(self) -> Result<Self, FamilyError> {
        if !(self.alpha > -4.0 && self.alpha < 2.0) {
            return Err(FamilyError::AlphaOutOfRange(self.alpha));
        }
        if !(self.m_bound > 0.0) {
            return Err(FamilyError::NonPositiveM(self.m_bound));
        }
        if self.kind == FamilyKind::Custom && self.custom.is_none() {
            return Err(FamilyError::MissingCustomTable);
        }
        Ok(self)
    }

    pub fn power(alpha: f64) -> Result<Self, FamilyError> {
        FamilySpec {
            kind: FamilyKind::Power,
            alpha,
            m_bound: 1.0,
            symmetric: true,
            custom: None,
        }
        .validated()
    }

    pub fn alternating(alpha: f64) -> Result<Self, FamilyError> {
        FamilySpec {
            kind: FamilyKind::Alternating,
            alpha,
            m_bound: 3.0,
            symmetric: true,
            custom: None,
        }
        .validated()
    }

    pub fn block2(alpha: f64) -> Result<Self, FamilyError> {
        FamilySpec {
            kind: FamilyKind::Block2,
            alpha,
            m_bound: 2.0,
            symmetric: true,
            custom: None,
        }
        .validated()
    }

    pub fn custom(
        alpha: f64,
        m_bound: f64,
        symmetric: bool,
        table: CustomTable,
    ) -> Result<Self, FamilyError> {
        FamilySpec {
            kind: FamilyKind::Custom,
            alpha,
            m_bound,
            symmetric,
            custom: Some(table),
        }
        .validated()
    }

    pub fn with_m_bound(mut self, m: f64) -> Result<Self, FamilyError> {
        self.m_bound = m;
        self.validated()
    }

    /// Integer multiplier in front of `k^alpha` for the built-in kinds.
    fn multiplier(&self, k: u32) -> i64 {
        match self.kind {
            FamilyKind::Power => 1,
            FamilyKind::Alternating => 2 + if k % 2 == 0 { 1 } else { -1 },
            FamilyKind::Block2 => 1 - if k % 2 == 0 { 1 } else { -1 },
            FamilyKind::Custom => unreachable!("custom handled separately"),
        }
    }

    /// `(q_k, b_k, c_k)` with `q_k = k^2`.
    pub fn entries(&self, k: u32) -> Result<(f64, C64, C64), FamilyError> {
        assert!(k >= 1, "indices are 1-based");
        let q = (k as f64) * (k as f64);
        let (b, c) = self.couplings(k)?;
        Ok((q, b, c))
    }

    /// `(b_k, c_k)` alone.
    pub fn couplings(&self, k: u32) -> Result<(C64, C64), FamilyError> {
        assert!(k >= 1, "indices are 1-based");
        if self.kind == FamilyKind::Custom {
            return self.custom_couplings(k);
        }
        let v = self.multiplier(k) as f64 * (k as f64).powf(self.alpha);
        let b = C64::new(v, 0.0);
        Ok((b, b))
    }

    fn custom_couplings(&self, k: u32) -> Result<(C64, C64), FamilyError> {
        let table = self.custom.as_ref().ok_or(FamilyError::MissingCustomTable)?;
        if let Some(&(b, c)) = table.pairs.get(k as usize - 1) {
            return Ok((b, c));
        }
        match &table.extension {
            ExtensionRule::None => Err(FamilyError::CustomIndexOutOfRange {
                index: k,
                len: table.pairs.len(),
            }),
            ExtensionRule::Zero => Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0))),
            ExtensionRule::Formula { b, c } => {
                let bv = formula::eval(b, k as f64, self.alpha)?;
                let cv = match c {
                    Some(cf) => formula::eval(cf, k as f64, self.alpha)?,
                    None => bv,
                };
                Ok((C64::new(bv, 0.0), C64::new(cv, 0.0)))
            }
        }
    }

    /// Multiprecision couplings; for the built-in kinds `k^alpha` is computed
    /// at full context precision. Custom tables carry f64 precision.
    pub fn couplings_mp(&self, k: u32, ctx: &MpCtx) -> Result<(MpComplex, MpComplex), FamilyError> {
        if self.kind == FamilyKind::Custom {
            let (b, c) = self.custom_couplings(k)?;
            return Ok((ctx.c_from_c64(b), ctx.c_from_c64(c)));
        }
        let pow = ctx.int_pow_alpha(k, self.alpha);
        let v = ctx.mul(&ctx.from_i64(self.multiplier(k)), &pow);
        let b = ctx.c_real(v);
        Ok((b.clone(), b))
    }

    /// Leading `N x N` principal submatrix of `L + zB`.
    pub fn truncate(&self, z: C64, n_dim: usize) -> Result<TriDiagonalMatrix, FamilyError> {
        assert!(n_dim >= 2, "truncation needs N >= 2");
        let mut diagonal = Vec::with_capacity(n_dim);
        let mut sup = Vec::with_capacity(n_dim - 1);
        let mut sub = Vec::with_capacity(n_dim - 1);
        for k in 1..=n_dim as u32 {
            diagonal.push(C64::new((k as f64) * (k as f64), 0.0));
            if (k as usize) < n_dim {
                let (b, c) = self.couplings(k)?;
                sup.push(z * b);
                sub.push(z * c);
            }
        }
        Ok(TriDiagonalMatrix {
            diagonal,
            sup,
            sub,
        })
    }

    /// Checks `|b_k|, |c_k| <= M k^alpha` for `1 <= k <= k_max`.
    pub fn validate_growth(&self, k_max: u32) -> Result<bool, FamilyError> {
        for k in 1..=k_max {
            let (b, c) = self.couplings(k)?;
            let cap = self.m_bound * (k as f64).powf(self.alpha);
            if b.norm() > cap || c.norm() > cap {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `key = value` config block; custom tables reference an external path.
    pub fn to_config_string(&self) -> String {
        let mut s = format!(
            "kind = {}\nalpha = {}\nM = {}\nsymmetric = {}\n",
            self.kind.name(),
            self.alpha,
            self.m_bound,
            self.symmetric
        );
        if let Some(table) = &self.custom {
            match &table.extension {
                ExtensionRule::None => s.push_str("extension = none\n"),
                ExtensionRule::Zero => s.push_str("extension = zero\n"),
                ExtensionRule::Formula { b, c } => {
                    s.push_str(&format!("extension = formula: {b}\n"));
                    if let Some(c) = c {
                        s.push_str(&format!("extension_c = formula: {c}\n"));
                    }
                }
            }
        }
        s
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(alpha={}, M={})", self.kind.name(), self.alpha, self.m_bound)
    }
}

/// Finite section of `L + zB`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriDiagonalMatrix {
    diagonal: Vec<C64>,
    sup: Vec<C64>,
    sub: Vec<C64>,
}

impl TriDiagonalMatrix {
    pub fn new(diagonal: Vec<C64>, sup: Vec<C64>, sub: Vec<C64>) -> Self {
        assert_eq!(diagonal.len().saturating_sub(1), sup.len());
        assert_eq!(sup.len(), sub.len());
        TriDiagonalMatrix { diagonal, sup, sub }
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[C64] {
        &self.diagonal
    }

    /// Super-diagonal entries `z * b_k` (couples k to k+1).
    pub fn sup(&self) -> &[C64] {
        &self.sup
    }

    /// Sub-diagonal entries `z * c_k` (couples k+1 to k).
    pub fn sub(&self) -> &[C64] {
        &self.sub
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        match col as i64 - row as i64 {
            0 => self.diagonal[row],
            1 => self.sup[row],
            -1 => self.sub[col],
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn leading_block(&self, n: usize) -> TriDiagonalMatrix {
        TriDiagonalMatrix {
            diagonal: self.diagonal[..n].to_vec(),
            sup: self.sup[..n - 1].to_vec(),
            sub: self.sub[..n - 1].to_vec(),
        }
    }

    /// Row-sum norm; used for relative eigen-residuals.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let mut s = self.diagonal[i].norm();
                if i > 0 {
                    s += self.sub[i - 1].norm();
                }
                if i < self.dim() - 1 {
                    s += self.sup[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Sparse CSV dump: `row, col, re, im` (1-based indices).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for i in 0..self.dim() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                i + 1,
                self.diagonal[i].re,
                self.diagonal[i].im
            ));
            if i + 1 < self.dim() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    i + 2,
                    self.sup[i].re,
                    self.sup[i].im
                ));
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 2,
                    i + 1,
                    self.sub[i].re,
                    self.sub[i].im
                ));
            }
        }
        out
    }
}

/// Parses coupling-table CSV: one `b_re, b_im, c_re, c_im` row per index,
/// starting at k = 1. Lines beginning with `#` are comments.
pub fn parse_table_csv(text: &str) -> Result<Vec<(C64, C64)>, FamilyError> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| FamilyError::Formula(format!("table line {}: {e}", lineno + 1)))?;
        match fields.as_slice() {
            [b] => pairs.push((C64::new(*b, 0.0), C64::new(*b, 0.0))),
            [br, bi, cr, ci] => pairs.push((C64::new(*br, *bi), C64::new(*cr, *ci))),
            _ => {
                return Err(FamilyError::Formula(format!(
                    "table line {}: expected 1 or 4 fields",
                    lineno + 1
                )))
            }
        }
    }
    Ok(pairs)
}

/// Tiny expression evaluator for custom extension formulas.
/// Grammar: `+ - * / ^`, parentheses, numbers, `k`, `alpha`.
pub mod formula {
    use crate::error::FamilyError;

    pub fn eval(src: &str, k: f64, alpha: f64) -> Result<f64, FamilyError> {
        let tokens = lex(src)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            k,
            alpha,
        };
        let v = p.expr()?;
        if p.pos != tokens.len() {
            return Err(FamilyError::Formula(format!(
                "trailing input at token {}",
                p.pos
            )));
        }
        Ok(v)
    }

    #[derive(Debug, PartialEq, Clone)]
    enum Tok {
        Num(f64),
        K,
        Alpha,
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
    }

    fn lex(src: &str) -> Result<Vec<Tok>, FamilyError> {
        let mut out = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' => i += 1,
                '+' => {
                    out.push(Tok::Plus);
                    i += 1;
                }
                '-' => {
                    out.push(Tok::Minus);
                    i += 1;
                }
                '*' => {
                    out.push(Tok::Star);
                    i += 1;
                }
                '/' => {
                    out.push(Tok::Slash);
                    i += 1;
                }
                '^' => {
                    out.push(Tok::Caret);
                    i += 1;
                }
                '(' => {
                    out.push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    out.push(Tok::RParen);
                    i += 1;
                }
                'k' => {
                    out.push(Tok::K);
                    i += 1;
                }
                'a' => {
                    if src[i..].starts_with("alpha") {
                        out.push(Tok::Alpha);
                        i += 5;
                    } else {
                        return Err(FamilyError::Formula(format!("bad identifier at {i}")));
                    }
                }
                '0'..='9' | '.' => {
                    let start = i;
                    while i < bytes.len()
                        && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E')
                    {
                        i += 1;
                    }
                    let v = src[start..i]
                        .parse::<f64>()
                        .map_err(|e| FamilyError::Formula(format!("bad number: {e}")))?;
                    out.push(Tok::Num(v));
                }
                _ => return Err(FamilyError::Formula(format!("unexpected char {c:?}"))),
            }
        }
        Ok(out)
    }

    struct Parser<'a> {
        tokens: &'a [Tok],
        pos: usize,
        k: f64,
        alpha: f64,
    }

    impl Parser<'_> {
        fn peek(&self) -> Option<&Tok> {
            self.tokens.get(self.pos)
        }

        fn expr(&mut self) -> Result<f64, FamilyError> {
            let mut acc = self.term()?;
            while let Some(t) = self.peek() {
                match t {
                    Tok::Plus => {
                        self.pos += 1;
                        acc += self.term()?;
                    }
                    Tok::Minus => {
                        self.pos += 1;
                        acc -= self.term()?;
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<f64, FamilyError> {
            let mut acc = self.factor()?;
            while let Some(t) = self.peek() {
                match t {
                    Tok::Star => {
                        self.pos += 1;
                        acc *= self.factor()?;
                    }
                    Tok::Slash => {
                        self.pos += 1;
                        acc /= self.factor()?;
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<f64, FamilyError> {
            let base = self.unary()?;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                let e = self.factor()?;
                return Ok(base.powf(e));
            }
            Ok(base)
        }

        fn unary(&mut self) -> Result<f64, FamilyError> {
            if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                return Ok(-self.unary()?);
            }
            self.atom()
        }

        fn atom(&mut self) -> Result<f64, FamilyError> {
            let t = self
                .peek()
                .cloned()
                .ok_or_else(|| FamilyError::Formula("unexpected end of input".into()))?;
            self.pos += 1;
            match t {
                Tok::Num(v) => Ok(v),
                Tok::K => Ok(self.k),
                Tok::Alpha => Ok(self.alpha),
                Tok::LParen => {
                    let v = self.expr()?;
                    if self.peek() != Some(&Tok::RParen) {
                        return Err(FamilyError::Formula("missing closing paren".into()));
                    }
                    self.pos += 1;
                    Ok(v)
                }
                other => Err(FamilyError::Formula(format!("unexpected token {other:?}"))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_family_entries() {
        let f = FamilySpec::power(0.0).unwrap();
        let (q, b, c) = f.entries(5).unwrap();
        assert_eq!(q, 25.0);
        assert_eq!(b, C64::new(1.0, 0.0));
        assert_eq!(c, C64::new(1.0, 0.0));
    }

    #[test]
    fn alternating_family_entries() {
        let f = FamilySpec::alternating(0.0).unwrap();
        assert_eq!(f.entries(2).unwrap(), (4.0, C64::new(3.0, 0.0), C64::new(3.0, 0.0)));
        assert_eq!(f.entries(3).unwrap(), (9.0, C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
    }

    #[test]
    fn block2_family_entries() {
        let f = FamilySpec::block2(0.0).unwrap();
        assert_eq!(f.entries(1).unwrap(), (1.0, C64::new(2.0, 0.0), C64::new(2.0, 0.0)));
        assert_eq!(f.entries(2).unwrap(), (4.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
    }

    #[test]
    fn truncation_values() {
        let f = FamilySpec::power(0.0).unwrap();
        let t = f.truncate(C64::new(0.0, 0.0), 3).unwrap();
        assert_eq!(t.diagonal(), &[C64::new(1.0, 0.0), C64::new(4.0, 0.0), C64::new(9.0, 0.0)]);
        assert!(t.sup().iter().all(|v| v.norm() == 0.0));

        let t = f.truncate(C64::new(1.0, 0.0), 2).unwrap();
        assert_eq!(t.entry(0, 1), C64::new(1.0, 0.0));
        assert_eq!(t.entry(1, 0), C64::new(1.0, 0.0));
        assert_eq!(t.entry(1, 1), C64::new(4.0, 0.0));
    }

    #[test]
    fn block2_truncation_splits() {
        let f = FamilySpec::block2(0.0).unwrap();
        let t = f.truncate(C64::new(0.0, 1.0), 4).unwrap();
        // entries (2,3)/(3,2) are zero: the even coupling vanishes
        assert_eq!(t.entry(1, 2), C64::new(0.0, 0.0));
        assert_eq!(t.entry(2, 1), C64::new(0.0, 0.0));
        assert_eq!(t.entry(0, 1), C64::new(0.0, 2.0));
    }

    #[test]
    fn truncations_nest() {
        let f = FamilySpec::alternating(0.5).unwrap();
        let z = C64::new(0.3, 0.7);
        let big = f.truncate(z, 8).unwrap();
        let small = f.truncate(z, 5).unwrap();
        assert_eq!(big.leading_block(5), small);
    }

    #[test]
    fn growth_bound() {
        assert!(FamilySpec::power(0.5).unwrap().validate_growth(100).unwrap());
        let alt = FamilySpec::alternating(0.0).unwrap();
        assert!(alt.validate_growth(100).unwrap());
        assert!(!alt.clone().with_m_bound(2.0).unwrap().validate_growth(100).unwrap());

        let table = CustomTable {
            pairs: vec![(C64::new(10.0, 0.0), C64::new(10.0, 0.0))],
            extension: ExtensionRule::Zero,
        };
        let f = FamilySpec::custom(0.0, 1.0, true, table).unwrap();
        assert!(!f.validate_growth(1).unwrap());
    }

    #[test]
    fn custom_out_of_range() {
        let table = CustomTable {
            pairs: vec![(C64::new(1.0, 0.0), C64::new(1.0, 0.0))],
            extension: ExtensionRule::None,
        };
        let f = FamilySpec::custom(0.0, 1.0, true, table).unwrap();
        assert!(f.couplings(1).is_ok());
        assert!(matches!(
            f.couplings(2),
            Err(FamilyError::CustomIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn custom_formula_extension() {
        let table = CustomTable {
            pairs: vec![],
            extension: ExtensionRule::Formula {
                b: "2 * k^alpha".into(),
                c: None,
            },
        };
        let f = FamilySpec::custom(0.5, 2.0, true, table).unwrap();
        let (b, c) = f.couplings(4).unwrap();
        assert_eq!(b.re, 4.0);
        assert_eq!(b, c);
    }

    #[test]
    fn alpha_range_enforced() {
        assert!(FamilySpec::power(2.0).is_err());
        assert!(FamilySpec::power(-4.0).is_err());
        assert!(FamilySpec::power(-3.9).is_ok());
    }

    #[test]
    fn formula_parser_cases() {
        assert_eq!(formula::eval("(2 - 1) * k + 0.5", 3.0, 0.0).unwrap(), 3.5);
        assert_eq!(formula::eval("k^2 / 2", 4.0, 0.0).unwrap(), 8.0);
        assert_eq!(formula::eval("-k^alpha", 9.0, 0.5).unwrap(), -3.0);
        assert!(formula::eval("2 +", 1.0, 0.0).is_err());
        assert!(formula::eval("q", 1.0, 0.0).is_err());
    }
}
