//! Text form of series.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | 'eps' | 'mu' | action | angle | 't'
//!         | ('sin' | 'cos' | 'exp') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Angles and `t` may only appear inside `sin`, `cos` and `exp`, whose
//! arguments must be integer combinations of them (times `i` for `exp`).

use super::{Key, Mode, Series};
use crate::arith::{GInt, GaussianRational, Int, RatFn, MAX_VARS};
use num_bigint::BigInt;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LiteralError {
    #[error("unexpected character {0:?} at offset {1}")]
    BadChar(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected token {0:?}")]
    Unexpected(String),
    #[error("unknown identifier {0:?}")]
    UnknownName(String),
    #[error("angle variable {0:?} outside sin/cos/exp")]
    BareAngle(String),
    #[error("argument of {0} is not an integer combination of angles and time")]
    BadPhase(String),
    #[error("division by a series that is not a non-zero function of the actions")]
    BadDivision,
    #[error("exponent must be a non-negative integer")]
    BadExponent,
    #[error("grading exceeds supported range")]
    GradeOverflow,
}

/// Variable names used when parsing and printing.
#[derive(Clone, Debug)]
pub struct Names {
    pub actions: Vec<String>,
    pub angles: Vec<String>,
}

impl Names {
    /// `y`/`x` for one degree of freedom, `y1..yn`/`x1..xn` otherwise.
    pub fn default_for(dim: usize) -> Names {
        if dim == 1 {
            Names { actions: vec!["y".into()], angles: vec!["x".into()] }
        } else {
            Names {
                actions: (1..=dim).map(|i| format!("y{i}")).collect(),
                angles: (1..=dim).map(|i| format!("x{i}")).collect(),
            }
        }
    }

    /// Upper-case variant used for normalised variables.
    pub fn upper(dim: usize) -> Names {
        let n = Names::default_for(dim);
        Names {
            actions: n.actions.iter().map(|s| s.to_uppercase()).collect(),
            angles: n.angles.iter().map(|s| s.to_uppercase()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.actions.len()
    }

    fn action_index(&self, s: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == s || a.to_uppercase() == s)
    }

    fn angle_index(&self, s: &str) -> Option<usize> {
        self.angles.iter().position(|a| a == s || a.to_uppercase() == s)
    }

    fn action_refs(&self) -> Vec<&str> {
        self.actions.iter().map(|s| s.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(GaussianRational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, LiteralError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = i;
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    i = save;
                }
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text).ok_or(LiteralError::BadChar(c, start))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(LiteralError::BadChar(c, i));
        }
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `12`, `0.125` or `1.5e-3`.
pub fn parse_decimal(text: &str) -> Option<GaussianRational> {
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(p) => (&text[..p], text[p + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(p) => (&mant[..p], &mant[p + 1..]),
        None => (mant, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let (num, den) = if scale >= 0 {
        (n * ten.pow(scale as u32), BigInt::from(1))
    } else {
        (n, ten.pow((-scale) as u32))
    };
    Some(GaussianRational::new(GInt::real(Int::from(num)), Int::from(den)))
}

#[derive(Debug, Clone)]
enum Ast {
    Num(GaussianRational),
    I,
    Eps,
    Mu,
    Action(usize),
    Angle(usize, String),
    Time,
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Call(String, Box<Ast>),
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a Names,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, LiteralError> {
        let t = self.toks.get(self.pos).cloned().ok_or(LiteralError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, c: char) -> Result<(), LiteralError> {
        match self.next()? {
            Tok::Op(o) if o == c => Ok(()),
            t => Err(LiteralError::Unexpected(format!("{t:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Ast, LiteralError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c)) = self.peek() {
            let c = *c;
            if c != '+' && c != '-' {
                break;
            }
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Ast::Bin(c, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, LiteralError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c)) = self.peek() {
            let c = *c;
            if c != '*' && c != '/' {
                break;
            }
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Ast::Bin(c, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, LiteralError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast, LiteralError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = match self.next()? {
                Tok::Num(n) => n,
                Tok::Op('(') => {
                    let t = self.next()?;
                    self.expect(')')?;
                    match t {
                        Tok::Num(n) => n,
                        _ => return Err(LiteralError::BadExponent),
                    }
                }
                _ => return Err(LiteralError::BadExponent),
            };
            let (n, d) = e.re_parts();
            if !e.is_real() || !d.is_one() || n.is_negative() || n > Int::from(10_000i64) {
                return Err(LiteralError::BadExponent);
            }
            return Ok(Ast::Pow(Box::new(base), n.to_f64() as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, LiteralError> {
        match self.next()? {
            Tok::Num(n) => Ok(Ast::Num(n)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if matches!(name.as_str(), "sin" | "cos" | "exp") {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    return Ok(Ast::Call(name, Box::new(e)));
                }
                match name.as_str() {
                    "i" | "I" => return Ok(Ast::I),
                    "eps" => return Ok(Ast::Eps),
                    "mu" => return Ok(Ast::Mu),
                    "t" => return Ok(Ast::Time),
                    _ => {}
                }
                if let Some(v) = self.names.action_index(&name) {
                    return Ok(Ast::Action(v));
                }
                if let Some(v) = self.names.angle_index(&name) {
                    return Ok(Ast::Angle(v, name));
                }
                Err(LiteralError::UnknownName(name))
            }
            t => Err(LiteralError::Unexpected(format!("{t:?}"))),
        }
    }
}

/// Complex-linear form in the angles and time.
#[derive(Clone, Debug)]
struct Phase {
    x: [GaussianRational; MAX_VARS],
    t: GaussianRational,
    c: GaussianRational,
}

impl Phase {
    fn constant(c: GaussianRational) -> Phase {
        Phase {
            x: std::array::from_fn(|_| GaussianRational::zero()),
            t: GaussianRational::zero(),
            c,
        }
    }

    fn is_constant(&self) -> bool {
        self.t.is_zero() && self.x.iter().all(|v| v.is_zero())
    }

    fn map(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Phase {
        Phase { x: std::array::from_fn(|i| f(&self.x[i])), t: f(&self.t), c: f(&self.c) }
    }

    fn add(&self, o: &Phase) -> Phase {
        Phase { x: std::array::from_fn(|i| self.x[i].add(&o.x[i])), t: self.t.add(&o.t), c: self.c.add(&o.c) }
    }
}

fn eval_phase(ast: &Ast, what: &str) -> Result<Phase, LiteralError> {
    let bad = || LiteralError::BadPhase(what.to_string());
    Ok(match ast {
        Ast::Num(n) => Phase::constant(n.clone()),
        Ast::I => Phase::constant(GaussianRational::i()),
        Ast::Time => Phase { t: GaussianRational::one(), ..Phase::constant(GaussianRational::zero()) },
        Ast::Angle(v, _) => {
            let mut p = Phase::constant(GaussianRational::zero());
            p.x[*v] = GaussianRational::one();
            p
        }
        Ast::Neg(a) => eval_phase(a, what)?.map(|v| v.neg()),
        Ast::Bin(op, a, b) => {
            let pa = eval_phase(a, what)?;
            let pb = eval_phase(b, what)?;
            match op {
                '+' => pa.add(&pb),
                '-' => pa.add(&pb.map(|v| v.neg())),
                '*' => {
                    if pa.is_constant() {
                        pb.map(|v| v.mul(&pa.c))
                    } else if pb.is_constant() {
                        pa.map(|v| v.mul(&pb.c))
                    } else {
                        return Err(bad());
                    }
                }
                '/' => {
                    if !pb.is_constant() || pb.c.is_zero() {
                        return Err(bad());
                    }
                    let r = pb.c.recip();
                    pa.map(|v| v.mul(&r))
                }
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    })
}

fn integer_of(g: &GaussianRational) -> Option<i16> {
    if !g.is_real() || !g.den().is_one() {
        return None;
    }
    let (n, _) = g.re_parts();
    match n {
        Int::Small(v) if v.abs() < i16::MAX as i128 => Some(v as i16),
        _ => None,
    }
}

fn phase_mode(p: &Phase, what: &str) -> Result<Mode, LiteralError> {
    let bad = || LiteralError::BadPhase(what.to_string());
    if !p.c.is_zero() {
        return Err(bad());
    }
    let mut k = [0i16; MAX_VARS];
    for (kv, xv) in k.iter_mut().zip(p.x.iter()) {
        *kv = integer_of(xv).ok_or_else(bad)?;
    }
    Ok(Mode { k, m: integer_of(&p.t).ok_or_else(bad)? })
}

const PARSE_NMAX: u32 = 250;

fn eval_series(ast: &Ast, dim: usize) -> Result<Series, LiteralError> {
    let konst = |c: RatFn| Series::from_ratfn(dim, c);
    Ok(match ast {
        Ast::Num(n) => konst(RatFn::constant(n)),
        Ast::I => konst(RatFn::constant(&GaussianRational::i())),
        Ast::Eps => Series::term(dim, 1, 0, Mode::default(), RatFn::one()),
        Ast::Mu => Series::term(dim, 0, 1, Mode::default(), RatFn::one()),
        Ast::Action(v) => konst(RatFn::var(*v)),
        Ast::Angle(_, name) => return Err(LiteralError::BareAngle(name.clone())),
        Ast::Time => return Err(LiteralError::BareAngle("t".into())),
        Ast::Neg(a) => eval_series(a, dim)?.neg(),
        Ast::Bin(op, a, b) => {
            let sa = eval_series(a, dim)?;
            let sb = eval_series(b, dim)?;
            match op {
                '+' => sa.add(&sb),
                '-' => sa.sub(&sb),
                '*' => sa.mul(&sb, PARSE_NMAX),
                '/' => {
                    if sb.len() != 1 {
                        return Err(LiteralError::BadDivision);
                    }
                    let (k, c) = sb.iter().next().unwrap();
                    if *k != Key::default() || c.is_zero() {
                        return Err(LiteralError::BadDivision);
                    }
                    sa.mul_ratfn(&c.recip())
                }
                _ => unreachable!(),
            }
        }
        Ast::Pow(a, e) => {
            let s = eval_series(a, dim)?;
            if s.max_grade().unwrap_or(0) as u64 * *e as u64 > PARSE_NMAX as u64 {
                return Err(LiteralError::GradeOverflow);
            }
            if s.len() == 1 {
                let (k, c) = s.iter().next().unwrap();
                if k.mode().is_zero() {
                    let j = k.j as u32 * e;
                    let p = k.p as u32 * e;
                    return Ok(Series::term(dim, j as u8, p as u8, Mode::default(), c.pow(*e).canonical()));
                }
            }
            s.pow(*e, PARSE_NMAX)
        }
        Ast::Call(f, arg) => {
            let ph = eval_phase(arg, f)?;
            let half = GaussianRational::from_ratio(1, 2);
            match f.as_str() {
                "exp" => {
                    // exp(i * L): divide the phase by i
                    let l = ph.map(|v| v.mul(&GaussianRational::i().neg()));
                    let mode = phase_mode(&l, f)?;
                    Series::term(dim, 0, 0, mode, RatFn::one())
                }
                "cos" | "sin" => {
                    let mode = phase_mode(&ph, f)?;
                    if mode.is_zero() {
                        return Ok(if f == "cos" { Series::constant(dim, 1) } else { Series::zero(dim) });
                    }
                    let (cp, cm) = if f == "cos" {
                        (RatFn::constant(&half), RatFn::constant(&half))
                    } else {
                        // sin = (e^{i th} - e^{-i th}) / (2i)
                        let c = GaussianRational::from_parts(0, 1, -1, 2);
                        (RatFn::constant(&c), RatFn::constant(&c.neg()))
                    };
                    let mut s = Series::term(dim, 0, 0, mode, cp);
                    s.add_term(Key::new(0, 0, mode.neg()), &cm);
                    s
                }
                _ => unreachable!(),
            }
        }
    })
}

/// Parse a series literal.
pub fn parse_series(src: &str, names: &Names) -> Result<Series, LiteralError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, names };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(LiteralError::Unexpected(format!("{:?}", p.toks[p.pos])));
    }
    eval_series(&ast, names.dim())
}

/// Parse a literal that must be a function of the actions only.
pub fn parse_ratfn(src: &str, names: &Names) -> Result<RatFn, LiteralError> {
    let s = parse_series(src, names)?;
    if s.is_zero() {
        return Ok(RatFn::zero());
    }
    if s.len() == 1 {
        if let Some(c) = s.get(&Key::default()) {
            return Ok(c.clone());
        }
    }
    Err(LiteralError::Unexpected("expected a function of the actions only".into()))
}

fn phase_text(mode: &Mode, names: &Names) -> String {
    let mut s = String::new();
    let mut push = |coef: i16, name: &str| {
        if coef == 0 {
            return;
        }
        let sign = if coef < 0 { "-" } else { "+" };
        let a = coef.unsigned_abs();
        if s.is_empty() {
            if coef < 0 {
                s.push('-');
            }
        } else {
            let _ = write!(s, " {sign} ");
        }
        if a == 1 {
            s.push_str(name);
        } else {
            let _ = write!(s, "{a}*{name}");
        }
    };
    for (v, name) in names.angles.iter().enumerate() {
        push(mode.k[v], name);
    }
    push(mode.m, "t");
    s
}

fn grade_prefix(j: u8, p: u8) -> String {
    let mut parts = Vec::new();
    match j {
        0 => {}
        1 => parts.push("eps".to_string()),
        _ => parts.push(format!("eps^{j}")),
    }
    match p {
        0 => {}
        1 => parts.push("mu".to_string()),
        _ => parts.push(format!("mu^{p}")),
    }
    parts.join("*")
}

/// Canonical exponential form; `parse_series` inverts it exactly.
pub fn print_series(s: &Series, names: &Names) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let refs = names.action_refs();
    let mut out = Vec::new();
    for (k, c) in s.iter() {
        let mut factors = Vec::new();
        let g = grade_prefix(k.j, k.p);
        if !g.is_empty() {
            factors.push(g);
        }
        factors.push(format!("({})", c.fmt_with(&refs)));
        let mode = k.mode();
        if !mode.is_zero() {
            factors.push(format!("exp(i*({}))", phase_text(&mode, names)));
        }
        out.push(factors.join("*"));
    }
    out.join(" + ")
}

/// Human-oriented form pairing conjugate modes into `cos`/`sin`.
///
/// Falls back to exponentials for terms without a conjugate partner.
pub fn print_series_real(s: &Series, names: &Names) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let refs = names.action_refs();
    let mut out: Vec<(bool, String)> = Vec::new();
    let two = GaussianRational::from_int(2);
    let mut emit = |coef: RatFn, func: &str| {
        if coef.is_zero() {
            return;
        }
        let neg = coef.num().leading().is_some_and(|(_, c)| c.re.is_negative() || (c.re.is_zero() && c.im.is_negative()));
        let coef = if neg { coef.neg() } else { coef };
        let body = coef.fmt_with(&refs);
        let text = if func.is_empty() {
            body
        } else if coef.is_constant() && coef.as_constant().is_some_and(|c| c == GaussianRational::one()) {
            func.to_string()
        } else {
            let wrapped = if body.contains(['+', '-']) && !body.starts_with('(') { format!("({body})") } else { body };
            format!("{wrapped}*{func}")
        };
        out.push((neg, text));
    };
    for (k, c) in s.iter() {
        let mode = k.mode();
        let prefix = grade_prefix(k.j, k.p);
        let func_of = |f: &str| {
            let base = if f.is_empty() { String::new() } else { f.to_string() };
            match (prefix.is_empty(), base.is_empty()) {
                (true, _) => base,
                (false, true) => prefix.clone(),
                (false, false) => format!("{prefix}*{base}"),
            }
        };
        if mode.is_zero() {
            emit(c.clone(), &func_of(""));
            continue;
        }
        let partner = Key::new(k.j, k.p, mode.neg());
        let rep = canonical_sign(&mode);
        match s.get(&partner) {
            Some(pc) if *pc == c.conj() => {
                if !rep {
                    continue;
                }
                // c e^{i th} + conj(c) e^{-i th} = 2 Re c cos th - 2 Im c sin th
                let re = c.add(&c.conj()).scale(&GaussianRational::from_ratio(1, 2));
                let im = c.sub(&c.conj()).scale(&GaussianRational::from_parts(0, 1, -1, 2));
                let ph = phase_text(&mode, names);
                emit(re.scale(&two), &func_of(&format!("cos({ph})")));
                emit(im.scale(&two).neg(), &func_of(&format!("sin({ph})")));
            }
            _ => {
                let ph = phase_text(&mode, names);
                emit(c.clone(), &func_of(&format!("exp(i*({ph}))")));
            }
        }
    }
    let mut s = String::new();
    for (idx, (neg, text)) in out.iter().enumerate() {
        if idx == 0 {
            if *neg {
                s.push('-');
            }
        } else {
            s.push_str(if *neg { " - " } else { " + " });
        }
        s.push_str(text);
    }
    s
}

/// Representative of `{mode, -mode}`: first non-zero entry positive.
fn canonical_sign(mode: &Mode) -> bool {
    for v in mode.k.iter().chain(std::iter::once(&mode.m)) {
        if *v != 0 {
            return *v > 0;
        }
    }
    true
}
