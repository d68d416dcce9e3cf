void f(void)
{
    int i = 0;
    i--;
}
