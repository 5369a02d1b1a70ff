use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{CurveModel, Discretization, Model, ModelKind, SphereModel, TorusModel};
use crate::error::{Error, Result};

/// Builds one family of models from its parameters.
pub trait ModelFactory: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn default_resolution(&self) -> usize;
    fn build(&self, kind: &ModelKind, resolution: usize, disc: &Discretization) -> Result<Box<dyn Model>>;
}

struct Curves {
    name: &'static str,
    describe: &'static str,
}

impl ModelFactory for Curves {
    fn name(&self) -> &'static str {
        self.name
    }
    fn describe(&self) -> &'static str {
        self.describe
    }
    fn default_resolution(&self) -> usize {
        64
    }
    fn build(&self, kind: &ModelKind, resolution: usize, disc: &Discretization) -> Result<Box<dyn Model>> {
        Ok(Box::new(CurveModel::new(kind.clone(), resolution, disc.spin_structure)?))
    }
}

struct Spheres {
    name: &'static str,
    describe: &'static str,
}

impl ModelFactory for Spheres {
    fn name(&self) -> &'static str {
        self.name
    }
    fn describe(&self) -> &'static str {
        self.describe
    }
    fn default_resolution(&self) -> usize {
        12
    }
    fn build(&self, kind: &ModelKind, resolution: usize, _disc: &Discretization) -> Result<Box<dyn Model>> {
        Ok(Box::new(SphereModel::new(kind.clone(), resolution)?))
    }
}

struct Tori {
    name: &'static str,
    describe: &'static str,
    resolution: usize,
}

impl ModelFactory for Tori {
    fn name(&self) -> &'static str {
        self.name
    }
    fn describe(&self) -> &'static str {
        self.describe
    }
    fn default_resolution(&self) -> usize {
        self.resolution
    }
    fn build(&self, kind: &ModelKind, resolution: usize, _disc: &Discretization) -> Result<Box<dyn Model>> {
        Ok(Box::new(TorusModel::new(kind.clone(), resolution)?))
    }
}

/// Model factories keyed by kind name.
pub struct ModelRegistry {
    factories: BTreeMap<&'static str, Box<dyn ModelFactory>>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, factory: Box<dyn ModelFactory>) {
        self.factories.insert(factory.name(), factory);
    }

    pub fn get(&self, name: &str) -> Option<&dyn ModelFactory> {
        self.factories.get(name).map(|f| f.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ModelFactory> {
        self.factories.values().map(|f| f.as_ref())
    }

    pub fn build(&self, kind: &ModelKind, disc: &Discretization) -> Result<Box<dyn Model>> {
        let factory = self
            .get(kind.name())
            .ok_or_else(|| Error::config(format!("model.kind: unknown model '{}'", kind.name())))?;
        let resolution = disc.resolution.unwrap_or_else(|| factory.default_resolution());
        factory.build(kind, resolution, disc)
    }

    pub fn global() -> &'static ModelRegistry {
        static REGISTRY: OnceLock<ModelRegistry> = OnceLock::new();
        REGISTRY.get_or_init(ModelRegistry::default)
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = ModelRegistry::empty();
        r.register(Box::new(Curves {
            name: "circle",
            describe: "round circle of radius r in the plane (antiperiodic Fourier)",
        }));
        r.register(Box::new(Curves {
            name: "ellipse",
            describe: "ellipse with semi-axes a, b in the plane (antiperiodic Fourier)",
        }));
        r.register(Box::new(Spheres {
            name: "sphere2",
            describe: "round 2-sphere of radius r in R^3 (harmonic band L)",
        }));
        r.register(Box::new(Spheres {
            name: "geodesic_sphere_S3",
            describe: "geodesic sphere at distance rho in the unit 3-sphere (harmonic band L)",
        }));
        r.register(Box::new(Tori {
            name: "flat_torus2",
            describe: "flat torus with periods l1, l2 (plane waves, intrinsic)",
            resolution: 15,
        }));
        r.register(Box::new(Tori {
            name: "conformal_torus2",
            describe: "square torus with metric exp(2 w cos x)(dx^2 + dy^2) (intrinsic)",
            resolution: 15,
        }));
        r
    }
}

pub fn make_model(kind: &ModelKind, disc: &Discretization) -> Result<Box<dyn Model>> {
    ModelRegistry::global().build(kind, disc)
}
