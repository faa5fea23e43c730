fn main() {
    // Restore the default SIGPIPE disposition so piped invocations like
    // `stringy-chi list | head` terminate quietly instead of panicking
    // on a broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(stringy_chi::cli::run());
}
