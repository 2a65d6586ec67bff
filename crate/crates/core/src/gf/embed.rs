use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{poly, same_field, Field, FieldCtx, FieldElem};
use crate::error::{Error, Result};

/// Default cap on the degree of any constructed field over its prime field.
pub const DEFAULT_MAX_EXTENSION_DEGREE: usize = 12;

/// Field homomorphism determined by the image of the source generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    image: u64,
}

impl PartialEq for Embedding {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
            && same_field(&self.source, &other.source)
            && same_field(&self.target, &other.target)
    }
}

impl Eq for Embedding {}

fn root_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x005e_ed0f_1e1d)
}

impl Embedding {
    pub fn identity(field: &Field) -> Self {
        Embedding { source: field.clone(), target: field.clone(), image: field.generator() }
    }

    /// Checks that `image` is a root of the source modulus in `target`.
    pub fn new(source: &Field, target: &Field, image: u64) -> Result<Self> {
        if source.characteristic() != target.characteristic()
            || !target.degree().is_multiple_of(source.degree())
            || image >= target.order()
        {
            return Err(Error::FieldMismatch);
        }
        if poly::eval(target, source.modulus(), image) != 0 {
            return Err(Error::InvalidField("image is not a root of the source modulus".into()));
        }
        Ok(Embedding { source: source.clone(), target: target.clone(), image })
    }

    /// The embedding sending the generator to the smallest-encoded root.
    pub fn canonical(source: &Field, target: &Field) -> Result<Self> {
        Self::candidates(source, target)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidField("no embedding exists".into()))
    }

    fn candidates(source: &Field, target: &Field) -> Result<Vec<Self>> {
        if source.characteristic() != target.characteristic()
            || !target.degree().is_multiple_of(source.degree())
        {
            return Err(Error::FieldMismatch);
        }
        if source.is_prime_field() {
            return Ok(vec![Embedding {
                source: source.clone(),
                target: target.clone(),
                image: target.from_int(-(source.modulus()[0] as i64)),
            }]);
        }
        let roots = poly::roots(target, source.modulus(), &mut root_rng());
        Ok(roots
            .into_iter()
            .map(|image| Embedding { source: source.clone(), target: target.clone(), image })
            .collect())
    }

    /// An embedding `source -> target` compatible with given embeddings of a
    /// common subfield: `self ∘ into_source = into_target`.
    pub fn over(
        source: &Field,
        target: &Field,
        into_source: &Embedding,
        into_target: &Embedding,
    ) -> Result<Self> {
        if !same_field(&into_source.target, source)
            || !same_field(&into_target.target, target)
            || !same_field(&into_source.source, &into_target.source)
        {
            return Err(Error::FieldMismatch);
        }
        let probe = into_source.source.generator();
        let want = into_target.apply(probe);
        Self::candidates(source, target)?
            .into_iter()
            .find(|e| e.apply(into_source.apply(probe)) == want)
            .ok_or_else(|| Error::InvalidField("no compatible embedding".into()))
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn image_of_generator(&self) -> FieldElem {
        self.target.elem(self.image)
    }

    /// Raw image of an encoded source element.
    pub fn apply(&self, a: u64) -> u64 {
        if self.source.is_prime_field() || same_field(&self.source, &self.target) && self.image == self.source.generator() {
            return a;
        }
        let coeffs = self.source.decode(a);
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.target.add(self.target.mul(acc, self.image), c))
    }

    pub fn embed(&self, a: &FieldElem) -> Result<FieldElem> {
        if !same_field(a.field(), &self.source) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.target.elem(self.apply(a.value())))
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &Embedding) -> Result<Embedding> {
        if !same_field(&self.target, &then.source) {
            return Err(Error::FieldMismatch);
        }
        Ok(Embedding {
            source: self.source.clone(),
            target: then.target.clone(),
            image: then.apply(self.image),
        })
    }
}

/// `F_{p^{mk}}` together with the canonical embedding of `ctx`.
pub fn extend_field(ctx: &Field, k: usize, cap: usize) -> Result<(Field, Embedding)> {
    if k == 0 {
        return Err(Error::InvalidField("extension multiplier must be >= 1".into()));
    }
    if k == 1 {
        return Ok((ctx.clone(), Embedding::identity(ctx)));
    }
    let total = ctx.degree() * k;
    if total > cap {
        return Err(Error::ExtensionCap { requested: total, cap });
    }
    let target = FieldCtx::canonical(ctx.characteristic(), total)?;
    let emb = Embedding::canonical(ctx, &target)?;
    Ok((target, emb))
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Smallest field containing both `a` and `b`, with embeddings that agree on
/// the base field `base` given its embeddings into `a` and `b`.
pub fn common_extension(
    base_into_a: &Embedding,
    base_into_b: &Embedding,
    cap: usize,
) -> Result<(Field, Embedding, Embedding)> {
    let a = base_into_a.target();
    let b = base_into_b.target();
    if a.characteristic() != b.characteristic() {
        return Err(Error::FieldMismatch);
    }
    let deg = lcm(a.degree(), b.degree());
    if deg > cap {
        return Err(Error::ExtensionCap { requested: deg, cap });
    }
    let top = if deg == a.degree() {
        a.clone()
    } else if deg == b.degree() {
        b.clone()
    } else {
        FieldCtx::canonical(a.characteristic(), deg)?
    };
    let base_into_top = if same_field(&top, a) {
        base_into_a.clone()
    } else if same_field(&top, b) {
        base_into_b.clone()
    } else {
        Embedding::canonical(base_into_a.source(), &top)?
    };
    let ea = if same_field(&top, a) {
        Embedding::identity(a)
    } else {
        Embedding::over(a, &top, base_into_a, &base_into_top)?
    };
    let eb = if same_field(&top, b) && *base_into_b == base_into_top {
        Embedding::identity(b)
    } else {
        Embedding::over(b, &top, base_into_b, &base_into_top)?
    };
    Ok((top, ea, eb))
}
