fn main() -> std::process::ExitCode {
    eislab::cli::run(std::env::args_os())
}
