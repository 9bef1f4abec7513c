using System.IO;

public class Reader
{
    public string Read(string path)
    {
        try
        {
            return File.ReadAllText(path);
        }
        catch (FileNotFoundException)       // +1 catch
        {
            return "";
        }
        catch (IOException)                 // +1 catch
        {
            throw;
        }
        finally
        {
            Log(path);
        }
    }

    private void Log(string p)
    {
    }
}
