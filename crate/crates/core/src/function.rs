//! Pure n-ary functions over events. Each evaluation returns both a value
//! and the set of argument indices that explain that value: an argument set
//! smaller than the full tuple means the remaining arguments could take any
//! value without changing the result (short-circuit lineage).
//!
//! Tie-breaking when several arguments each suffice alone is always the
//! lowest index.

use std::sync::Arc;

use crate::error::FunctionError;
use crate::event::Event;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exact(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exact(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

/// A pure function with value-dependent lineage.
pub trait LineageFunction: Send + Sync {
    fn name(&self) -> &'static str;
    fn arity(&self) -> Arity;
    /// Returns the value and the sorted, non-empty set of contributing
    /// argument indices.
    fn eval(&self, args: &[Event]) -> Result<(Event, Vec<usize>), FunctionError>;
}

pub type FunctionRef = Arc<dyn LineageFunction>;

/// Evaluates `f` after checking its arity contract.
pub fn eval_with_lineage(
    f: &dyn LineageFunction,
    args: &[Event],
) -> Result<(Event, Vec<usize>), FunctionError> {
    if !f.arity().accepts(args.len()) {
        return Err(FunctionError::WrongArity {
            function: f.name().to_string(),
            expected: match f.arity() {
                Arity::Exact(k) => k.to_string(),
                Arity::AtLeast(k) => format!(">= {}", k),
            },
            got: args.len(),
        });
    }
    let (value, indices) = f.eval(args)?;
    debug_assert!(!indices.is_empty() && indices.iter().all(|&i| i < args.len()));
    Ok((value, indices))
}

fn number_arg(name: &str, args: &[Event], i: usize) -> Result<f64, FunctionError> {
    args[i].as_number().ok_or_else(|| FunctionError::TypeMismatch {
        function: name.to_string(),
        index: i,
        got: args[i].to_string(),
    })
}

fn bool_arg(name: &str, args: &[Event], i: usize) -> Result<bool, FunctionError> {
    args[i].as_bool().ok_or_else(|| FunctionError::TypeMismatch {
        function: name.to_string(),
        index: i,
        got: args[i].to_string(),
    })
}

fn all_indices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

macro_rules! lineage_fn {
    ($ty:ident, $name:literal, $arity:expr, |$args:ident| $body:expr) => {
        #[derive(Debug, Clone, Copy, Default)]
        pub struct $ty;

        impl LineageFunction for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn arity(&self) -> Arity {
                $arity
            }
            fn eval(&self, $args: &[Event]) -> Result<(Event, Vec<usize>), FunctionError> {
                $body
            }
        }
    };
}

lineage_fn!(Addition, "Addition", Arity::AtLeast(1), |args| {
    let mut sum = 0.0;
    for i in 0..args.len() {
        sum += number_arg("Addition", args, i)?;
    }
    Ok((Event::Number(sum), all_indices(args.len())))
});

lineage_fn!(Subtraction, "Subtraction", Arity::Exact(2), |args| {
    let a = number_arg("Subtraction", args, 0)?;
    let b = number_arg("Subtraction", args, 1)?;
    Ok((Event::Number(a - b), all_indices(2)))
});

// An absorbing zero explains the product alone; the lowest-index zero wins.
lineage_fn!(Multiplication, "Multiplication", Arity::AtLeast(1), |args| {
    let mut product = 1.0;
    let mut first_zero = None;
    for i in 0..args.len() {
        let v = number_arg("Multiplication", args, i)?;
        product *= v;
        if v == 0.0 && first_zero.is_none() {
            first_zero = Some(i);
        }
    }
    let indices = match first_zero {
        Some(i) => vec![i],
        None => all_indices(args.len()),
    };
    Ok((Event::Number(product), indices))
});

lineage_fn!(Conjunction, "Conjunction", Arity::AtLeast(1), |args| {
    let mut first_false = None;
    for i in 0..args.len() {
        if !bool_arg("Conjunction", args, i)? && first_false.is_none() {
            first_false = Some(i);
        }
    }
    Ok(match first_false {
        Some(i) => (Event::Bool(false), vec![i]),
        None => (Event::Bool(true), all_indices(args.len())),
    })
});

lineage_fn!(Disjunction, "Disjunction", Arity::AtLeast(1), |args| {
    let mut first_true = None;
    for i in 0..args.len() {
        if bool_arg("Disjunction", args, i)? && first_true.is_none() {
            first_true = Some(i);
        }
    }
    Ok(match first_true {
        Some(i) => (Event::Bool(true), vec![i]),
        None => (Event::Bool(false), all_indices(args.len())),
    })
});

// A false antecedent is a sufficient cause and wins over a true consequent.
lineage_fn!(Implication, "Implication", Arity::Exact(2), |args| {
    let a = bool_arg("Implication", args, 0)?;
    let c = bool_arg("Implication", args, 1)?;
    Ok(if !a {
        (Event::Bool(true), vec![0])
    } else if c {
        (Event::Bool(true), vec![1])
    } else {
        (Event::Bool(false), vec![0, 1])
    })
});

lineage_fn!(Negation, "Negation", Arity::Exact(1), |args| {
    let a = bool_arg("Negation", args, 0)?;
    Ok((Event::Bool(!a), vec![0]))
});

lineage_fn!(LessThan, "LessThan", Arity::Exact(2), |args| {
    let a = number_arg("LessThan", args, 0)?;
    let b = number_arg("LessThan", args, 1)?;
    Ok((Event::Bool(a < b), all_indices(2)))
});

lineage_fn!(Equals, "Equals", Arity::Exact(2), |args| {
    Ok((Event::Bool(args[0] == args[1]), all_indices(2)))
});

lineage_fn!(NotEquals, "NotEquals", Arity::Exact(2), |args| {
    Ok((Event::Bool(args[0] != args[1]), all_indices(2)))
});

lineage_fn!(Identity, "Identity", Arity::Exact(1), |args| {
    Ok((args[0].clone(), vec![0]))
});

/// Unary equality against a fixed literal.
#[derive(Debug, Clone)]
pub struct EqualsConstant(pub Event);

impl LineageFunction for EqualsConstant {
    fn name(&self) -> &'static str {
        "EqualsConstant"
    }
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }
    fn eval(&self, args: &[Event]) -> Result<(Event, Vec<usize>), FunctionError> {
        Ok((Event::Bool(args[0] == self.0), vec![0]))
    }
}

/// Unary `x < c` against a fixed literal.
#[derive(Debug, Clone, Copy)]
pub struct LessThanConstant(pub f64);

impl LineageFunction for LessThanConstant {
    fn name(&self) -> &'static str {
        "LessThanConstant"
    }
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }
    fn eval(&self, args: &[Event]) -> Result<(Event, Vec<usize>), FunctionError> {
        let a = number_arg("LessThanConstant", args, 0)?;
        Ok((Event::Bool(a < self.0), vec![0]))
    }
}

/// Fetches one named field out of a tuple event.
#[derive(Debug, Clone)]
pub struct TupleFetch(pub String);

impl TupleFetch {
    pub fn new(field: impl Into<String>) -> Self {
        TupleFetch(field.into())
    }
}

impl LineageFunction for TupleFetch {
    fn name(&self) -> &'static str {
        "TupleFetch"
    }
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }
    fn eval(&self, args: &[Event]) -> Result<(Event, Vec<usize>), FunctionError> {
        match &args[0] {
            Event::Tuple(_) => args[0]
                .field(&self.0)
                .cloned()
                .map(|v| (v, vec![0]))
                .ok_or_else(|| FunctionError::MissingField { field: self.0.clone() }),
            other => Err(FunctionError::TypeMismatch {
                function: "TupleFetch".to_string(),
                index: 0,
                got: other.to_string(),
            }),
        }
    }
}

/// A guard that fires on any event.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnyEvent;

impl LineageFunction for AnyEvent {
    fn name(&self) -> &'static str {
        "AnyEvent"
    }
    fn arity(&self) -> Arity {
        Arity::Exact(1)
    }
    fn eval(&self, _args: &[Event]) -> Result<(Event, Vec<usize>), FunctionError> {
        Ok((Event::Bool(true), vec![0]))
    }
}

/// The identity element used to seed a cumulative application of `f`, if
/// one is known.
pub fn identity_element(f: &dyn LineageFunction) -> Option<Event> {
    match f.name() {
        "Addition" => Some(Event::Number(0.0)),
        "Multiplication" => Some(Event::Number(1.0)),
        "Conjunction" => Some(Event::Bool(true)),
        "Disjunction" => Some(Event::Bool(false)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> Event {
        Event::number(v as i32)
    }
    fn b(v: bool) -> Event {
        Event::Bool(v)
    }

    #[test]
    fn multiplication_zero_short_circuits() {
        let (v, idx) = eval_with_lineage(&Multiplication, &[n(0), n(5)]).unwrap();
        assert_eq!((v, idx), (n(0), vec![0]));
    }

    #[test]
    fn multiplication_double_zero_picks_lowest_index() {
        let (v, idx) = eval_with_lineage(&Multiplication, &[n(0), n(0)]).unwrap();
        assert_eq!((v, idx), (n(0), vec![0]));
    }

    #[test]
    fn addition_depends_on_all_operands() {
        let (v, idx) = eval_with_lineage(&Addition, &[n(3), n(4)]).unwrap();
        assert_eq!((v, idx), (n(7), vec![0, 1]));
    }

    #[test]
    fn conjunction_false_short_circuits() {
        let (v, idx) = eval_with_lineage(&Conjunction, &[b(false), b(true)]).unwrap();
        assert_eq!((v, idx), (b(false), vec![0]));
    }

    #[test]
    fn not_equals_on_equal_operands_needs_both() {
        let (v, idx) = eval_with_lineage(&NotEquals, &[n(0), n(0)]).unwrap();
        assert_eq!((v, idx), (b(false), vec![0, 1]));
    }

    #[test]
    fn implication_rule_table() {
        let cases = [
            ((false, false), (true, vec![0])),
            ((false, true), (true, vec![0])),
            ((true, true), (true, vec![1])),
            ((true, false), (false, vec![0, 1])),
        ];
        for ((a, c), (v, idx)) in cases {
            let got = eval_with_lineage(&Implication, &[b(a), b(c)]).unwrap();
            assert_eq!(got, (b(v), idx), "implies({a},{c})");
        }
    }

    #[test]
    fn arity_and_type_errors() {
        assert!(matches!(
            eval_with_lineage(&Implication, &[b(true)]),
            Err(FunctionError::WrongArity { .. })
        ));
        assert!(matches!(
            eval_with_lineage(&Addition, &[Event::text("x")]),
            Err(FunctionError::TypeMismatch { .. })
        ));
        assert!(matches!(
            eval_with_lineage(&TupleFetch::new("p"), &[Event::tuple(vec![("q", n(1))])]),
            Err(FunctionError::MissingField { .. })
        ));
    }
}
