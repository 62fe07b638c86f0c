pub mod covers;
pub mod cyclo;
pub mod knotforge;
pub mod lambda;
pub mod seifert;
pub mod witt;
