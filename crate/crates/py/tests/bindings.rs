use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = PyModule::new(py, "pointfree_py").unwrap();
        pointfree_py::pointfree_py(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("pf", m).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn frames_from_python() {
    with_module(
        c"
s = pf.FiniteFrame.sierpinski()
assert s.check('regular') == (False, 'u')
assert s.negation('u') == '0'
assert pf.FiniteFrame.boolean(3).check('locally_compact')[0]
",
    );
}

#[test]
fn algebras_from_python() {
    with_module(
        c"
a = pf.Algebra.findim(2)
lo, hi, w = a.norm('0:3/10,1:7/10')
assert w == 1
assert a.ideal_to_open('ideal supp={1}') == '{1}'
assert pf.compactified_open_count(4) == 32
try:
    pf.lemma1_refine('3', '2', '1', 4)
    raise AssertionError('accepted')
except ValueError:
    pass
",
    );
}
