use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(code: &str, check: F) {
    Python::attach(|py| {
        let m = PyModule::new(py, "starters").unwrap();
        starters::init_module(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("starters", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        py.run(&code, Some(&globals), None).unwrap();
        check(py, &globals);
    });
}

#[test]
fn demo_triplication_from_python() {
    with_module(
        "base = starters.Pairing(7, [(2, 3), (4, 6), (1, 5)])\n\
         out = starters.triplicate(base, 1)\n\
         status = out.status\n\
         strong = out.starter_a.verify().is_strong and out.starter_b.verify().is_strong\n\
         order = out.starter_a.order\n",
        |_, g| {
            assert_eq!(g.get_item("status").unwrap().unwrap().extract::<String>().unwrap(), "SAT");
            assert!(g.get_item("strong").unwrap().unwrap().extract::<bool>().unwrap());
            assert_eq!(g.get_item("order").unwrap().unwrap().extract::<u32>().unwrap(), 21);
        },
    );
}

#[test]
fn refusals_raise() {
    with_module(
        "base = starters.Pairing(7, [(2, 3), (4, 6), (1, 5)])\n\
         try:\n    starters.triplicate(base, 0)\n    raised = False\n\
         except starters.RefusedError:\n    raised = True\n\
         forced = starters.triplicate(base, 0, force=True).status\n",
        |_, g| {
            assert!(g.get_item("raised").unwrap().unwrap().extract::<bool>().unwrap());
            assert_eq!(g.get_item("forced").unwrap().unwrap().extract::<String>().unwrap(), "UNSAT");
        },
    );
}
