//! Arithmetic expression evaluation for the calculator tool.
//!
//! Supports integers and decimals, `+ - * /`, parentheses, and unary minus,
//! with standard precedence and left associativity. Division is real-valued.
//! Evaluation runs shunting-yard over a token stream into RPN.

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalcError {
    #[error("empty expression")]
    Empty,
    #[error("unknown token {found:?} at position {position}")]
    UnknownToken { position: usize, found: char },
    #[error("unbalanced parentheses")]
    UnbalancedParens,
    #[error("malformed expression")]
    Malformed,
    #[error("division by zero")]
    DivisionByZero,
}

/// Evaluates `expression` and renders the result as a decimal string.
/// Integral results print without a fractional part ("4", not "4.0").
pub fn calculator(expression: &str) -> Result<String, CalcError> {
    let value = evaluate(expression)?;
    Ok(render_number(value))
}

/// Evaluates `expression` to a real number.
pub fn evaluate(expression: &str) -> Result<f64, CalcError> {
    let tokens = lex(expression)?;
    if tokens.is_empty() {
        return Err(CalcError::Empty);
    }
    let rpn = shunting_yard(&tokens)?;
    eval_rpn(&rpn)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Number(f64),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn lex(expression: &str) -> Result<Vec<Token>, CalcError> {
    let chars: Vec<char> = expression.chars().collect();
    let mut tokens = Vec::new();
    let mut at = 0usize;
    while at < chars.len() {
        let c = chars[at];
        match c {
            ' ' | '\t' | '\n' => at += 1,
            '+' => {
                tokens.push(Token::Plus);
                at += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                at += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                at += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                at += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                at += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                at += 1;
            }
            '0'..='9' => {
                let start = at;
                while at < chars.len() && chars[at].is_ascii_digit() {
                    at += 1;
                }
                if at < chars.len() && chars[at] == '.' {
                    if at + 1 >= chars.len() || !chars[at + 1].is_ascii_digit() {
                        return Err(CalcError::UnknownToken { position: at, found: '.' });
                    }
                    at += 1;
                    while at < chars.len() && chars[at].is_ascii_digit() {
                        at += 1;
                    }
                }
                let literal: String = chars[start..at].iter().collect();
                let value = literal.parse::<f64>().map_err(|_| CalcError::Malformed)?;
                tokens.push(Token::Number(value));
            }
            found => return Err(CalcError::UnknownToken { position: at, found }),
        }
    }
    Ok(tokens)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

impl Op {
    fn precedence(self) -> u8 {
        match self {
            Op::Add | Op::Sub => 1,
            Op::Mul | Op::Div => 2,
            Op::Neg => 3,
        }
    }

    fn right_associative(self) -> bool {
        self == Op::Neg
    }
}

#[derive(Debug, Clone, Copy)]
enum Rpn {
    Number(f64),
    Op(Op),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum StackItem {
    Op(Op),
    LParen,
}

fn shunting_yard(tokens: &[Token]) -> Result<Vec<Rpn>, CalcError> {
    let mut output = Vec::new();
    let mut stack: Vec<StackItem> = Vec::new();
    // A minus is unary at the start, after an operator, or after '('.
    let mut expect_operand = true;
    for &token in tokens {
        match token {
            Token::Number(value) => {
                if !expect_operand {
                    return Err(CalcError::Malformed);
                }
                output.push(Rpn::Number(value));
                expect_operand = false;
            }
            Token::Minus if expect_operand => {
                stack.push(StackItem::Op(Op::Neg));
            }
            Token::Plus | Token::Minus | Token::Star | Token::Slash => {
                if expect_operand {
                    return Err(CalcError::Malformed);
                }
                let op = match token {
                    Token::Plus => Op::Add,
                    Token::Minus => Op::Sub,
                    Token::Star => Op::Mul,
                    Token::Slash => Op::Div,
                    _ => unreachable!(),
                };
                while let Some(StackItem::Op(top)) = stack.last().copied() {
                    let binds_tighter = top.precedence() > op.precedence()
                        || (top.precedence() == op.precedence() && !op.right_associative());
                    if binds_tighter {
                        output.push(Rpn::Op(top));
                        stack.pop();
                    } else {
                        break;
                    }
                }
                stack.push(StackItem::Op(op));
                expect_operand = true;
            }
            Token::LParen => {
                if !expect_operand {
                    return Err(CalcError::Malformed);
                }
                stack.push(StackItem::LParen);
            }
            Token::RParen => {
                if expect_operand {
                    return Err(CalcError::Malformed);
                }
                loop {
                    match stack.pop() {
                        Some(StackItem::Op(op)) => output.push(Rpn::Op(op)),
                        Some(StackItem::LParen) => break,
                        None => return Err(CalcError::UnbalancedParens),
                    }
                }
                expect_operand = false;
            }
        }
    }
    while let Some(item) = stack.pop() {
        match item {
            StackItem::Op(op) => output.push(Rpn::Op(op)),
            StackItem::LParen => return Err(CalcError::UnbalancedParens),
        }
    }
    Ok(output)
}

fn eval_rpn(rpn: &[Rpn]) -> Result<f64, CalcError> {
    let mut stack: Vec<f64> = Vec::new();
    for &item in rpn {
        match item {
            Rpn::Number(value) => stack.push(value),
            Rpn::Op(Op::Neg) => {
                let value = stack.pop().ok_or(CalcError::Malformed)?;
                stack.push(-value);
            }
            Rpn::Op(op) => {
                let rhs = stack.pop().ok_or(CalcError::Malformed)?;
                let lhs = stack.pop().ok_or(CalcError::Malformed)?;
                let value = match op {
                    Op::Add => lhs + rhs,
                    Op::Sub => lhs - rhs,
                    Op::Mul => lhs * rhs,
                    Op::Div => {
                        if rhs == 0.0 {
                            return Err(CalcError::DivisionByZero);
                        }
                        lhs / rhs
                    }
                    Op::Neg => unreachable!(),
                };
                stack.push(value);
            }
        }
    }
    if stack.len() != 1 {
        return Err(CalcError::Malformed);
    }
    Ok(stack[0])
}

fn render_number(value: f64) -> String {
    let normalized = if value == 0.0 { 0.0 } else { value };
    if normalized.fract() == 0.0 && normalized.abs() < 1e15 {
        format!("{normalized:.0}")
    } else {
        format!("{normalized}")
    }
}
