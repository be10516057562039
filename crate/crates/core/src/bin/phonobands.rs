fn main() -> std::process::ExitCode {
    phonobands::cli::main()
}
