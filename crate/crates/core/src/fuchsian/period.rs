use super::enumerate::GroupElement;
use super::group::Letter;
use crate::real::Real;

/// `int_g omega` for the form with generator periods `periods4`: the signed
/// sum of the periods of the letters of the word.
pub fn period<T: Real>(periods4: &[T; 4], w: &GroupElement<T>) -> T {
    word_period(periods4, &w.word)
}

pub fn word_period<T: Real>(periods4: &[T; 4], word: &[Letter]) -> T {
    word.iter().fold(T::zero(), |s, l| if l.is_inverse() { s - periods4[l.generator()] } else { s + periods4[l.generator()] })
}

/// Period from exponent sums.
pub fn abelian_period<T: Real>(periods4: &[T; 4], ab: &[i32; 4]) -> T {
    (0..4).fold(T::zero(), |s, k| s + periods4[k] * T::from_i32(ab[k]).unwrap())
}
