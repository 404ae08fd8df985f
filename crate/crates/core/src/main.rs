fn main() -> std::process::ExitCode {
    fuforge::cli::main()
}
