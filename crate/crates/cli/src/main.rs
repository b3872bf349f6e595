fn main() -> std::process::ExitCode {
    minlab_cli::main_with(std::env::args_os())
}
