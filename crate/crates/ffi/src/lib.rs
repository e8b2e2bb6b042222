//! C ABI over the analysis pipeline: opaque report handles, status codes and
//! a thread-local last-error message. Strings returned through out-pointers
//! are owned by the caller and must be released with `greyrank_string_free`;
//! reports with `greyrank_report_free`.
//!
//! The generated header lives at `include/greyrank.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use greyrank::config::{pipeline_config, synth_spec, ConfigFile};
use greyrank::gra::InfluenceClass;
use greyrank::pipeline::ingest::write_records;
use greyrank::pipeline::run_pipeline;
use greyrank::report::{parse_json_report, render_report, GraReport, OutputFormat};
use greyrank::synth::{gen_corpus, SynthSpec};

/// Result of every fallible call. Anything but `Ok` leaves a message in
/// `greyrank_last_error_message`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreyrankStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Reading or writing a file failed.
    Io = 3,
    /// The configuration file was rejected.
    InvalidConfig = 4,
    /// The pipeline rejected the data; the message names the stage.
    DataError = 5,
    /// An index argument was out of range.
    IndexOutOfRange = 6,
    /// The report document could not be parsed.
    ParseError = 7,
}

/// Output shape for `greyrank_report_render`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreyrankFormat {
    PlainTable = 0,
    CommaSeparated = 1,
    StructuredObject = 2,
}

impl From<GreyrankFormat> for OutputFormat {
    fn from(format: GreyrankFormat) -> Self {
        match format {
            GreyrankFormat::PlainTable => OutputFormat::PlainTable,
            GreyrankFormat::CommaSeparated => OutputFormat::CommaSeparated,
            GreyrankFormat::StructuredObject => OutputFormat::StructuredObject,
        }
    }
}

/// Influence class of a grade.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreyrankInfluence {
    Marked = 0,
    RelativelyMarked = 1,
    Noticeable = 2,
    Weak = 3,
    Negligible = 4,
}

impl From<InfluenceClass> for GreyrankInfluence {
    fn from(class: InfluenceClass) -> Self {
        match class {
            InfluenceClass::Marked => Self::Marked,
            InfluenceClass::RelativelyMarked => Self::RelativelyMarked,
            InfluenceClass::Noticeable => Self::Noticeable,
            InfluenceClass::Weak => Self::Weak,
            InfluenceClass::Negligible => Self::Negligible,
        }
    }
}

/// Opaque analysis result handle.
pub struct GreyrankReport {
    inner: GraReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn fail(status: GreyrankStatus, message: impl Into<String>) -> GreyrankStatus {
    set_error(message);
    status
}

/// Message for the most recent failure on this thread, or null after a
/// success. The pointer is valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn greyrank_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn greyrank_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

unsafe fn required_str<'a>(
    argument: *const c_char,
    name: &str,
) -> Result<&'a str, GreyrankStatus> {
    if argument.is_null() {
        return Err(fail(
            GreyrankStatus::NullArgument,
            format!("{name} must not be null"),
        ));
    }
    CStr::from_ptr(argument)
        .to_str()
        .map_err(|_| fail(GreyrankStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn optional_str<'a>(
    argument: *const c_char,
    name: &str,
) -> Result<Option<&'a str>, GreyrankStatus> {
    if argument.is_null() {
        return Ok(None);
    }
    required_str(argument, name).map(Some)
}

fn load_config_file(path: Option<&str>) -> Result<Option<ConfigFile>, GreyrankStatus> {
    match path {
        None => Ok(None),
        Some(path) => ConfigFile::from_path(Path::new(path))
            .map(Some)
            .map_err(|e| fail(GreyrankStatus::InvalidConfig, e.to_string())),
    }
}

unsafe fn write_report(
    out_report: *mut *mut GreyrankReport,
    report: GraReport,
) -> GreyrankStatus {
    if out_report.is_null() {
        return fail(GreyrankStatus::NullArgument, "out_report must not be null");
    }
    *out_report = Box::into_raw(Box::new(GreyrankReport { inner: report }));
    GreyrankStatus::Ok
}

/// Run the full analysis over a records file, an optional traffic file and an
/// optional configuration file. On success `*out_report` owns the result.
///
/// # Safety
/// Pointer arguments must be NUL-terminated strings or null where optional;
/// `out_report` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn greyrank_analyze_files(
    records_path: *const c_char,
    traffic_path: *const c_char,
    config_path: *const c_char,
    out_report: *mut *mut GreyrankReport,
) -> GreyrankStatus {
    clear_error();
    let records_path = match required_str(records_path, "records_path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let traffic_path = match optional_str(traffic_path, "traffic_path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let config_path = match optional_str(config_path, "config_path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let config_file = match load_config_file(config_path) {
        Ok(file) => file,
        Err(status) => return status,
    };
    let config = match pipeline_config(config_file.as_ref()) {
        Ok(config) => config,
        Err(e) => return fail(GreyrankStatus::InvalidConfig, e.to_string()),
    };
    match run_pipeline(
        Path::new(records_path),
        traffic_path.map(Path::new),
        &config,
    ) {
        Ok(report) => write_report(out_report, report),
        Err(e) => fail(GreyrankStatus::DataError, e.to_string()),
    }
}

/// Parse a report previously rendered as a structured (JSON) document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_from_json(
    json: *const c_char,
    out_report: *mut *mut GreyrankReport,
) -> GreyrankStatus {
    clear_error();
    let json = match required_str(json, "json") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match parse_json_report(json) {
        Ok(report) => write_report(out_report, report),
        Err(e) => fail(GreyrankStatus::ParseError, e.to_string()),
    }
}

/// Render a report; `*out_text` receives a caller-owned string.
///
/// # Safety
/// `report` must be a live handle from this library; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_render(
    report: *const GreyrankReport,
    format: GreyrankFormat,
    out_text: *mut *mut c_char,
) -> GreyrankStatus {
    clear_error();
    if report.is_null() || out_text.is_null() {
        return fail(GreyrankStatus::NullArgument, "report and out_text required");
    }
    let text = render_report(&(*report).inner, format.into());
    match CString::new(text) {
        Ok(text) => {
            *out_text = text.into_raw();
            GreyrankStatus::Ok
        }
        Err(_) => fail(GreyrankStatus::ParseError, "rendered text contained NUL"),
    }
}

/// Number of ranked feature rows.
///
/// # Safety
/// `report` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_feature_count(report: *const GreyrankReport) -> usize {
    if report.is_null() {
        return 0;
    }
    (*report).inner.feature_rows.len()
}

/// Number of group rows.
///
/// # Safety
/// `report` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_group_count(report: *const GreyrankReport) -> usize {
    if report.is_null() {
        return 0;
    }
    (*report).inner.group_rows.len()
}

unsafe fn feature_row<'a>(
    report: *const GreyrankReport,
    index: usize,
) -> Result<&'a greyrank::report::FeatureRow, GreyrankStatus> {
    if report.is_null() {
        return Err(fail(GreyrankStatus::NullArgument, "report must not be null"));
    }
    let report = &*report;
    report.inner.feature_rows.get(index).ok_or_else(|| {
        fail(
            GreyrankStatus::IndexOutOfRange,
            format!("feature index {index} out of range"),
        )
    })
}

unsafe fn group_row<'a>(
    report: *const GreyrankReport,
    index: usize,
) -> Result<&'a greyrank::report::GroupRow, GreyrankStatus> {
    if report.is_null() {
        return Err(fail(GreyrankStatus::NullArgument, "report must not be null"));
    }
    let report = &*report;
    report.inner.group_rows.get(index).ok_or_else(|| {
        fail(
            GreyrankStatus::IndexOutOfRange,
            format!("group index {index} out of range"),
        )
    })
}

fn out_string(value: &str, out: *mut *mut c_char) -> GreyrankStatus {
    if out.is_null() {
        return fail(GreyrankStatus::NullArgument, "out pointer must not be null");
    }
    match CString::new(value) {
        Ok(value) => {
            unsafe { *out = value.into_raw() };
            GreyrankStatus::Ok
        }
        Err(_) => fail(GreyrankStatus::ParseError, "string contained NUL"),
    }
}

/// Feature id at `index` (rank order); caller owns `*out_name`.
///
/// # Safety
/// `report` must be a live handle; `out_name` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_feature_name(
    report: *const GreyrankReport,
    index: usize,
    out_name: *mut *mut c_char,
) -> GreyrankStatus {
    clear_error();
    match feature_row(report, index) {
        Ok(row) => out_string(&row.feature, out_name),
        Err(status) => status,
    }
}

/// Grade of the feature at `index`.
///
/// # Safety
/// `report` must be a live handle; `out_grade` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_feature_grade(
    report: *const GreyrankReport,
    index: usize,
    out_grade: *mut f64,
) -> GreyrankStatus {
    clear_error();
    match feature_row(report, index) {
        Ok(row) => {
            if out_grade.is_null() {
                return fail(GreyrankStatus::NullArgument, "out_grade must not be null");
            }
            *out_grade = row.grade;
            GreyrankStatus::Ok
        }
        Err(status) => status,
    }
}

/// 1-based rank of the feature at `index`.
///
/// # Safety
/// `report` must be a live handle; `out_rank` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_feature_rank(
    report: *const GreyrankReport,
    index: usize,
    out_rank: *mut usize,
) -> GreyrankStatus {
    clear_error();
    match feature_row(report, index) {
        Ok(row) => {
            if out_rank.is_null() {
                return fail(GreyrankStatus::NullArgument, "out_rank must not be null");
            }
            *out_rank = row.rank;
            GreyrankStatus::Ok
        }
        Err(status) => status,
    }
}

/// Influence class of the feature at `index`.
///
/// # Safety
/// `report` must be a live handle; `out_class` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_feature_class(
    report: *const GreyrankReport,
    index: usize,
    out_class: *mut GreyrankInfluence,
) -> GreyrankStatus {
    clear_error();
    match feature_row(report, index) {
        Ok(row) => {
            if out_class.is_null() {
                return fail(GreyrankStatus::NullArgument, "out_class must not be null");
            }
            *out_class = row.class.into();
            GreyrankStatus::Ok
        }
        Err(status) => status,
    }
}

/// Group name at `index` (grade order); caller owns `*out_name`.
///
/// # Safety
/// `report` must be a live handle; `out_name` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_group_name(
    report: *const GreyrankReport,
    index: usize,
    out_name: *mut *mut c_char,
) -> GreyrankStatus {
    clear_error();
    match group_row(report, index) {
        Ok(row) => out_string(&row.group, out_name),
        Err(status) => status,
    }
}

/// Grade of the group at `index`.
///
/// # Safety
/// `report` must be a live handle; `out_grade` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_group_grade(
    report: *const GreyrankReport,
    index: usize,
    out_grade: *mut f64,
) -> GreyrankStatus {
    clear_error();
    match group_row(report, index) {
        Ok(row) => {
            if out_grade.is_null() {
                return fail(GreyrankStatus::NullArgument, "out_grade must not be null");
            }
            *out_grade = row.grade;
            GreyrankStatus::Ok
        }
        Err(status) => status,
    }
}

/// Whether the report carries a control-series grade.
///
/// # Safety
/// `report` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_has_control(report: *const GreyrankReport) -> bool {
    !report.is_null() && (*report).inner.control_row.is_some()
}

/// Grade of the control series, when present.
///
/// # Safety
/// `report` must be a live handle; `out_grade` writable.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_control_grade(
    report: *const GreyrankReport,
    out_grade: *mut f64,
) -> GreyrankStatus {
    clear_error();
    if report.is_null() || out_grade.is_null() {
        return fail(GreyrankStatus::NullArgument, "report and out_grade required");
    }
    match &(*report).inner.control_row {
        Some(row) => {
            *out_grade = row.grade;
            GreyrankStatus::Ok
        }
        None => fail(GreyrankStatus::IndexOutOfRange, "report has no control row"),
    }
}

/// Generate a synthetic corpus into `out_path`. `config_path` may be null for
/// the default spec; `seed_override` may be null to keep the spec seed.
///
/// # Safety
/// Pointer arguments must be NUL-terminated strings or null where optional.
#[no_mangle]
pub unsafe extern "C" fn greyrank_synth_generate(
    config_path: *const c_char,
    out_path: *const c_char,
    seed_override: *const u64,
) -> GreyrankStatus {
    clear_error();
    let out_path = match required_str(out_path, "out_path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let config_path = match optional_str(config_path, "config_path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let config_file = match load_config_file(config_path) {
        Ok(file) => file,
        Err(status) => return status,
    };
    let mut spec = match config_file {
        Some(file) => match synth_spec(&file) {
            Ok(spec) => spec,
            Err(e) => return fail(GreyrankStatus::InvalidConfig, e.to_string()),
        },
        None => SynthSpec::default(),
    };
    if !seed_override.is_null() {
        spec.seed = *seed_override;
    }
    let records = match gen_corpus(&spec) {
        Ok(records) => records,
        Err(e) => return fail(GreyrankStatus::InvalidConfig, e.to_string()),
    };
    match write_records(Path::new(out_path), &records) {
        Ok(()) => GreyrankStatus::Ok,
        Err(e) => fail(GreyrankStatus::Io, e.to_string()),
    }
}

/// Release a report handle. Null is a no-op.
///
/// # Safety
/// `report` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn greyrank_report_free(report: *mut GreyrankReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Release a string produced by this library. Null is a no-op.
///
/// # Safety
/// `text` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn greyrank_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
